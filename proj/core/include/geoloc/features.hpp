#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geoloc/preprocess.hpp"

namespace geoloc {

inline constexpr int kMinNgram = 2;
inline constexpr int kMaxNgram = 7;

inline constexpr std::string_view kLocationPlaceholder = "LOCATION";
inline constexpr std::string_view kSubLocationPlaceholder = "SUB-LOCATION";

using PatternCounts = std::map<std::string, std::size_t, std::less<>>;

/// Correct and incorrect pattern counts for one window length.
struct NgramTable {
  PatternCounts correct;
  PatternCounts incorrect;
  std::set<std::string, std::less<>> top_correct;
  std::set<std::string, std::less<>> top_incorrect;

  bool operator==(const NgramTable&) const = default;
};

/// The ceil(|counts| / 2) most frequent patterns; ties go to the
/// lexicographically smaller pattern.
std::set<std::string, std::less<>> top_half(const PatternCounts& counts);

class PatternCorpora {
 public:
  PatternCorpora() = default;
  PatternCorpora(int n_min, int n_max);

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }

  const NgramTable& table(int n) const;
  NgramTable& table(int n);

  void add(int n, const std::vector<std::string>& patterns, bool correct);
  void add_contributor(std::string story_id) { contributors_.insert(std::move(story_id)); }

  /// Recomputes the top halves from the current counts.
  void finalize();

  /// Stories whose mentions contributed patterns.
  const std::set<std::string>& contributors() const { return contributors_; }

  /// FNV-1a over every table (in key order) and the contributor ids.
  std::uint64_t fingerprint() const;

  bool operator==(const PatternCorpora&) const = default;

 private:
  int n_min_ = kMinNgram;
  int n_max_ = kMaxNgram;
  std::array<NgramTable, kMaxNgram + 1> tables_{};
  std::set<std::string> contributors_;
};

/// Every n-token window inside one sentence that covers a mention of
/// `canonical`, with each such mention written as LOCATION or SUB-LOCATION.
/// Throws InputError when the document never mentions `canonical`.
std::vector<std::string> collocation_ngrams(const TreatedDocument& doc, std::string_view canonical,
                                            int n);

/// Throws InputError naming the story when a mentioned location has no label.
PatternCorpora build_pattern_corpora(const std::vector<TreatedDocument>& docs,
                                     int n_min = kMinNgram, int n_max = kMaxNgram);

/// C / (C + I) over the corpus counts of `patterns`; 0.5 when neither corpus
/// knows any of them.
double ngram_ratio(const std::vector<std::string>& patterns, const PatternCorpora& corpora, int n);

struct TopMatches {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
};

TopMatches top_pattern_matches(const std::vector<std::string>& patterns,
                               const PatternCorpora& corpora, int n);

/// Number of distinct sentences mentioning `canonical`.
std::size_t sentence_frequency(const TreatedDocument& doc, std::string_view canonical);

struct Materiality {
  std::size_t material = 0;    // ACTION-VERB tags
  std::size_t immaterial = 0;  // NONTOPIC and SOURCE tags
};

/// Tag counts over the sentences mentioning `canonical`.
Materiality materiality(const TreatedDocument& doc, std::string_view canonical);

/// Unnormalized covariates of one (document, location) pair.
struct RawFeatures {
  std::vector<double> ratio;          // indexed by n - n_min
  std::vector<double> top_correct;
  std::vector<double> top_incorrect;
  double frequency = 0;
  double material = 0;
  double immaterial = 0;
};

RawFeatures raw_features(const TreatedDocument& doc, std::string_view canonical,
                         const PatternCorpora& corpora);

/// Column names in dataset order: for each n, ratio, top_correct and
/// top_incorrect (each _article then _data); then freq, material, immaterial.
std::vector<std::string> feature_names(int n_min = kMinNgram, int n_max = kMaxNgram);

struct FeatureRow {
  std::string story_id;
  std::string location;
  std::optional<int> label;
  std::vector<double> values;

  bool operator==(const FeatureRow&) const = default;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<FeatureRow> rows;
  /// Fingerprint of the corpora the covariates were computed against.
  std::uint64_t provenance = 0;

  std::size_t column(std::string_view name) const;  // throws PredictionError
  double value(std::size_t row, std::string_view name) const;
  std::size_t positives() const;

  bool operator==(const Dataset&) const = default;
};

enum class Scope { article, data };

/// Divides each value by the maximum of its group (the row's article, or the
/// whole dataset). Groups whose maximum is not positive become zeros.
void normalize(std::vector<FeatureRow>& rows, std::size_t column, Scope scope);

/// One row per (story, location) in order of first mention. Raw covariates are
/// computed against `corpora`, then normalized in both scopes over the rows
/// assembled here. Throws InputError for a label on an unmentioned location.
Dataset assemble_dataset(const std::vector<TreatedDocument>& docs, const PatternCorpora& corpora,
                         unsigned jobs = 1);

}  // namespace geoloc
