#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geoloc/baselines.hpp"
#include "geoloc/features.hpp"
#include "geoloc/lexicon.hpp"
#include "geoloc/model.hpp"
#include "geoloc/preprocess.hpp"

namespace geoloc {

struct CvPlan {
  std::size_t k = 3;
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
  /// Per repeat: story id -> fold.
  std::vector<std::map<std::string, std::size_t>> assignments;

  std::vector<std::string> test_stories(std::size_t repeat, std::size_t fold) const;
};

/// Each repeat shuffles the stories with its own derived seed and deals them
/// round-robin into k folds. Throws InputError for fewer than k stories or
/// duplicate ids.
CvPlan make_cv_plan(const std::vector<std::string>& story_ids, std::size_t k = 3,
                    std::size_t repeats = 3, std::uint64_t seed = 0);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  void add(int predicted, int label);
  std::size_t total() const { return tp + fp + tn + fn; }
  double accuracy() const;

  bool operator==(const Confusion&) const = default;
};

struct FoldResult {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::string predictor;
  Confusion confusion;
  double accuracy = 0;
  /// Share of test articles whose every row is classified correctly.
  double article_accuracy = 0;
  std::size_t test_articles = 0;
};

/// What a fold's pattern corpora were built from.
struct FoldAudit {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::uint64_t corpora_fingerprint = 0;
  std::vector<std::string> contributors;
  std::vector<std::string> test_stories;
};

struct ScoredRow {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::string story_id;
  std::string location;
  int label = 0;
  std::vector<double> scores;  // one per predictor, in report order
};

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  double threshold = 0;  // scores >= threshold are positive; +inf for (0,0)

  bool operator==(const RocPoint&) const = default;
};

/// One point per distinct score, sorted by threshold descending, from (0,0)
/// to (1,1). Throws EvaluationError unless both classes are present.
std::vector<RocPoint> roc_points(const std::vector<std::pair<double, int>>& scores);

/// Trapezoidal area under the points.
double auc(const std::vector<RocPoint>& points);

struct RocCurve {
  std::string predictor;
  std::size_t repeat = 0;
  std::vector<RocPoint> points;
  double auc = 0;
};

struct ProvinceCount {
  std::string province;
  std::size_t ground_truth = 0;
  std::vector<std::size_t> predicted;  // one per predictor
};

struct ProvinceAggregate {
  std::vector<std::string> predictors;
  std::vector<ProvinceCount> provinces;  // sorted by province name
};

/// Positive counts per province: labeled truth and each predictor's 0/1 output.
ProvinceAggregate province_aggregate(const std::vector<FeatureRow>& rows,
                                     const std::vector<std::string>& predictors,
                                     const std::vector<std::vector<int>>& predictions);

double row_accuracy(const std::vector<FeatureRow>& rows, const std::vector<int>& predictions);

/// Share of articles whose every row is predicted correctly.
double article_accuracy(const std::vector<FeatureRow>& rows, const std::vector<int>& predictions);

/// Accuracy over the rows of articles with exactly one positive label;
/// 0 when there are none (see `single_location_rows`).
double single_location_subset_accuracy(const std::vector<FeatureRow>& rows,
                                       const std::vector<int>& predictions);
std::size_t single_location_rows(const std::vector<FeatureRow>& rows);

struct PredictorSummary {
  std::string predictor;
  double mean_accuracy = 0;          // arithmetic mean over all fold results
  double mean_article_accuracy = 0;
  double pooled_accuracy = 0;        // over every scored row of every repeat
  double single_location_accuracy = 0;
  std::size_t single_location_rows = 0;
  double mean_auc = 0;               // over repeats
};

struct EvalReport {
  std::size_t k = 0;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::vector<std::string> predictors;
  std::vector<FoldResult> folds;  // ordered by (repeat, fold, predictor)
  std::vector<FoldAudit> audits;
  std::vector<PredictorSummary> summary;
  std::vector<RocCurve> roc;
  ProvinceAggregate provinces;  // from repeat 0
  std::vector<ScoredRow> predictions;

  const PredictorSummary& summary_for(std::string_view predictor) const;
};

struct CvOptions {
  std::vector<ClassifierSpec> classifiers;
  std::vector<Baseline> baselines{Baseline::dictionary, Baseline::nearest_verb, Baseline::focus};
  double threshold = 0.5;
  int n_min = kMinNgram;
  int n_max = kMaxNgram;
  /// Folds run concurrently on up to this many threads.
  unsigned jobs = 1;
};

/// For every (repeat, fold): pattern corpora and training rows from the
/// training stories only, test rows against those corpora, then every
/// classifier and baseline scored on the test rows. Throws EvaluationError
/// naming the fold when anything fails.
EvalReport run_cv(const std::vector<TreatedDocument>& docs, const CvPlan& plan,
                  const CvOptions& options);

EvalReport run_cv(const std::vector<Document>& corpus, const LexiconBundle& lexicons,
                  const CvPlan& plan, const CvOptions& options);

}  // namespace geoloc
