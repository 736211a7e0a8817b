#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace geoloc {

enum class Level { province, subprovince };

std::string_view to_string(Level level);
std::optional<Level> parse_level(std::string_view text);

/// Token categories produced by generalization. NUMERAL and DATE are not
/// lexicon-backed; they are recognised by pattern during generalization.
enum class Category { actor, action_verb, nontopic, source, directional, month, day, admin };

inline constexpr Category kAllCategories[] = {
    Category::actor,       Category::action_verb, Category::nontopic, Category::source,
    Category::directional, Category::month,       Category::day,      Category::admin};

/// Uppercase tag written into treated text, e.g. "ACTION-VERB".
std::string_view category_tag(Category category);
/// Accepts the tag ("ACTION-VERB") or the file stem spelling ("action_verb").
std::optional<Category> parse_category(std::string_view text);

inline constexpr std::string_view kNumeralTag = "NUMERAL";
inline constexpr std::string_view kDateTag = "DATE";

/// Longest gazetteer or category phrase, in tokens.
inline constexpr std::size_t kMaxPhraseTokens = 5;

struct LocationEntry {
  std::string province;
  Level level = Level::province;

  bool operator==(const LocationEntry&) const = default;
};

struct LocationMatch {
  std::string province;
  Level level = Level::province;
  std::size_t span = 0;

  bool operator==(const LocationMatch&) const = default;
};

/// Surface form -> (province, level) gazetteer. Keys are normalized phrases of
/// one to five tokens. Besides the surface keys the lexicon can carry treated
/// aliases (stopword-filtered, stemmed spellings) so lookups work on the token
/// stream produced by preprocessing.
class LocationLexicon {
 public:
  /// Throws InputError if `surface` already maps to a different province.
  void add(std::string_view surface, LocationEntry entry);
  void add_alias(std::string_view treated, const LocationEntry& entry);

  /// Checks that every subprovince parent is itself a province-level name.
  void validate() const;

  const LocationEntry* find(std::string_view phrase) const;
  bool has_province(std::string_view name) const;
  std::vector<std::string> provinces() const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, LocationEntry, std::less<>>& entries() const { return entries_; }
  const std::map<std::string, LocationEntry, std::less<>>& aliases() const { return aliases_; }

  bool operator==(const LocationLexicon&) const = default;

 private:
  std::map<std::string, LocationEntry, std::less<>> entries_;
  std::map<std::string, LocationEntry, std::less<>> aliases_;
};

struct CategoryLexicon {
  Category category = Category::actor;
  /// Stemmed phrases, tokens joined by single spaces.
  std::set<std::string> entries;

  bool operator==(const CategoryLexicon&) const = default;
};

struct StopwordList {
  std::set<std::string> words;
  std::set<std::string> preserved;

  /// Locational prepositions kept even when a stoplist names them.
  static std::set<std::string> default_preserved();

  /// A list containing only the default preserved prepositions.
  static StopwordList with_defaults();

  /// Removes preserved words from `words`.
  void normalize();

  bool is_stopword(std::string_view token) const;

  bool operator==(const StopwordList&) const = default;
};

struct StemExceptionList {
  /// over-stemmed form -> intended form, both lowercase.
  std::map<std::string, std::string, std::less<>> restore;

  std::string apply(std::string token) const;

  bool operator==(const StemExceptionList&) const = default;
};

/// Validated union of category lexicons keyed by treated phrase.
class CategoryIndex {
 public:
  CategoryIndex() = default;
  /// Throws InputError listing every phrase claimed by two categories.
  explicit CategoryIndex(const std::vector<CategoryLexicon>& lexicons);

  struct Match {
    Category category;
    std::size_t span;
  };

  /// Longest category phrase starting at `index` and ending before `end`.
  std::optional<Match> match(const std::vector<std::string>& tokens, std::size_t index,
                             std::size_t end = static_cast<std::size_t>(-1)) const;
  std::optional<Category> find(std::string_view phrase) const;

  std::size_t size() const { return phrases_.size(); }

 private:
  std::map<std::string, Category, std::less<>> phrases_;
  std::size_t longest_ = 0;
};

/// Everything preprocessing needs, validated together.
class LexiconBundle {
 public:
  LexiconBundle() = default;
  LexiconBundle(LocationLexicon locations, std::vector<CategoryLexicon> categories,
                StopwordList stopwords, StemExceptionList exceptions);

  /// Reads a lexicon directory:
  ///   locations.tsv (required), stopwords.txt, preserved.txt, stem_exceptions.tsv,
  ///   and one <category>.txt per category (actor.txt, action_verb.txt, ...).
  static LexiconBundle load_directory(const std::filesystem::path& dir);

  const LocationLexicon& locations() const { return locations_; }
  const std::vector<CategoryLexicon>& categories() const { return categories_; }
  const CategoryIndex& category_index() const { return category_index_; }
  const StopwordList& stopwords() const { return stopwords_; }
  const StemExceptionList& stem_exceptions() const { return exceptions_; }

 private:
  LocationLexicon locations_;
  std::vector<CategoryLexicon> categories_;
  StopwordList stopwords_ = StopwordList::with_defaults();
  StemExceptionList exceptions_;
  CategoryIndex category_index_;
};

/// TSV: surface<TAB>province[<TAB>level]. Without a level column an entry is a
/// province when surface == province and a subprovince otherwise. Blank lines
/// and lines starting with '#' are skipped.
LocationLexicon load_location_lexicon(const std::filesystem::path& path);
LocationLexicon parse_location_lexicon(std::string_view content,
                                       std::string_view source_name = "<memory>");

/// One term per line, '#' comments ignored; entries are stemmed token-wise.
CategoryLexicon load_category_lexicon(const std::filesystem::path& path, Category category);
CategoryLexicon load_category_lexicon(const std::filesystem::path& path, std::string_view tag);
CategoryLexicon parse_category_lexicon(std::string_view content, Category category);

StopwordList load_stopwords(const std::filesystem::path& path);
StopwordList parse_stopwords(std::string_view content);

StemExceptionList load_stem_exceptions(const std::filesystem::path& path);
StemExceptionList parse_stem_exceptions(std::string_view content,
                                        std::string_view source_name = "<memory>");

/// Longest phrase in `lexicon` (surface keys, then treated aliases) starting
/// at tokens[index]. Throws std::out_of_range if index is past the end.
std::optional<LocationMatch> resolve_location(const std::vector<std::string>& tokens,
                                              std::size_t index,
                                              const LocationLexicon& lexicon);

/// Applies stopword removal, stemming and stem exceptions to a phrase key.
std::string treat_phrase(std::string_view phrase, const StopwordList* stopwords,
                         const StemExceptionList* exceptions);

}  // namespace geoloc
