#include "geoloc/lexicon.hpp"

#include <algorithm>
#include <stdexcept>

#include "file_util.hpp"
#include "geoloc/error.hpp"
#include "geoloc/porter_stemmer.hpp"
#include "geoloc/text.hpp"

namespace geoloc {
namespace {

std::string located(std::string_view source, std::size_t line, std::string_view message) {
  return std::string(source) + ":" + std::to_string(line) + ": " + std::string(message);
}

bool is_comment_or_blank(std::string_view line) {
  const auto t = detail::trim(line);
  return t.empty() || t.front() == '#';
}

std::string stem_phrase(std::string_view phrase) {
  auto tokens = split_tokens(phrase);
  for (auto& token : tokens) token = porter_stem(token);
  return join_tokens(tokens);
}

}  // namespace

std::string_view to_string(Level level) {
  return level == Level::province ? "province" : "subprovince";
}

std::optional<Level> parse_level(std::string_view text) {
  if (text == "province") return Level::province;
  if (text == "subprovince") return Level::subprovince;
  return std::nullopt;
}

std::string_view category_tag(Category category) {
  switch (category) {
    case Category::actor: return "ACTOR";
    case Category::action_verb: return "ACTION-VERB";
    case Category::nontopic: return "NONTOPIC";
    case Category::source: return "SOURCE";
    case Category::directional: return "DIRECTIONAL";
    case Category::month: return "MONTH";
    case Category::day: return "DAY";
    case Category::admin: return "ADMIN";
  }
  return "";
}

std::optional<Category> parse_category(std::string_view text) {
  std::string upper;
  for (char c : text) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (c == '_') c = '-';
    upper.push_back(c);
  }
  for (Category category : kAllCategories) {
    if (category_tag(category) == upper) return category;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LocationLexicon

void LocationLexicon::add(std::string_view surface, LocationEntry entry) {
  const auto it = entries_.find(surface);
  if (it == entries_.end()) {
    entries_.emplace(std::string(surface), std::move(entry));
    return;
  }
  if (it->second.province != entry.province) {
    throw InputError("location '" + std::string(surface) + "' maps to both '" +
                     it->second.province + "' and '" + entry.province + "'");
  }
  if (it->second.level != entry.level) {
    throw InputError("location '" + std::string(surface) + "' listed as both province and "
                     "subprovince of '" + entry.province + "'");
  }
}

void LocationLexicon::add_alias(std::string_view treated, const LocationEntry& entry) {
  if (const auto* existing = find(treated)) {
    if (existing->province != entry.province) {
      throw InputError("treated location form '" + std::string(treated) + "' maps to both '" +
                       existing->province + "' and '" + entry.province + "'");
    }
    return;
  }
  aliases_.emplace(std::string(treated), entry);
}

void LocationLexicon::validate() const {
  for (const auto& [surface, entry] : entries_) {
    if (entry.level == Level::subprovince && !has_province(entry.province)) {
      throw InputError("subprovince '" + surface + "' names unknown province '" +
                       entry.province + "'");
    }
  }
}

const LocationEntry* LocationLexicon::find(std::string_view phrase) const {
  if (const auto it = entries_.find(phrase); it != entries_.end()) return &it->second;
  if (const auto it = aliases_.find(phrase); it != aliases_.end()) return &it->second;
  return nullptr;
}

bool LocationLexicon::has_province(std::string_view name) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& kv) {
    return kv.second.level == Level::province && kv.second.province == name;
  });
}

std::vector<std::string> LocationLexicon::provinces() const {
  std::set<std::string> names;
  for (const auto& [surface, entry] : entries_) {
    if (entry.level == Level::province) names.insert(entry.province);
  }
  return {names.begin(), names.end()};
}

LocationLexicon parse_location_lexicon(std::string_view content, std::string_view source_name) {
  LocationLexicon lexicon;
  const auto lines = detail::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_comment_or_blank(lines[i])) continue;
    const auto columns = detail::split_on(lines[i], '\t');
    if (columns.size() < 2 || columns.size() > 3) {
      throw InputError(located(source_name, line_no, "expected 2 or 3 tab-separated columns"));
    }
    const std::string surface = normalize_phrase(columns[0]);
    const std::string province = normalize_phrase(columns[1]);
    if (surface.empty() || province.empty()) {
      throw InputError(located(source_name, line_no, "empty surface form or province"));
    }
    if (split_tokens(surface).size() > kMaxPhraseTokens) {
      throw InputError(located(source_name, line_no,
                               "surface form '" + surface + "' is longer than " +
                                   std::to_string(kMaxPhraseTokens) + " tokens"));
    }
    Level level = surface == province ? Level::province : Level::subprovince;
    if (columns.size() == 3) {
      const auto parsed = parse_level(detail::trim(columns[2]));
      if (!parsed) {
        throw InputError(located(source_name, line_no,
                                 "unknown level '" + std::string(columns[2]) + "'"));
      }
      level = *parsed;
    }
    try {
      lexicon.add(surface, LocationEntry{province, level});
    } catch (const InputError& e) {
      throw InputError(located(source_name, line_no, e.what()));
    }
  }
  lexicon.validate();
  return lexicon;
}

LocationLexicon load_location_lexicon(const std::filesystem::path& path) {
  return parse_location_lexicon(detail::read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Category lexicons, stopwords, stem exceptions

CategoryLexicon parse_category_lexicon(std::string_view content, Category category) {
  CategoryLexicon lexicon{category, {}};
  for (const auto line : detail::split_lines(content)) {
    if (is_comment_or_blank(line)) continue;
    const std::string phrase = stem_phrase(normalize_phrase(line));
    if (!phrase.empty()) lexicon.entries.insert(phrase);
  }
  return lexicon;
}

CategoryLexicon load_category_lexicon(const std::filesystem::path& path, Category category) {
  return parse_category_lexicon(detail::read_file(path), category);
}

CategoryLexicon load_category_lexicon(const std::filesystem::path& path, std::string_view tag) {
  const auto category = parse_category(tag);
  if (!category) throw InputError("unknown category tag '" + std::string(tag) + "'");
  return load_category_lexicon(path, *category);
}

std::set<std::string> StopwordList::default_preserved() {
  return {"in", "at", "from", "of", "near", "to", "outside"};
}

StopwordList StopwordList::with_defaults() {
  return StopwordList{{}, default_preserved()};
}

void StopwordList::normalize() {
  for (const auto& word : preserved) words.erase(word);
}

bool StopwordList::is_stopword(std::string_view token) const {
  return words.find(std::string(token)) != words.end();
}

StopwordList parse_stopwords(std::string_view content) {
  StopwordList list = StopwordList::with_defaults();
  for (const auto line : detail::split_lines(content)) {
    if (is_comment_or_blank(line)) continue;
    for (auto& token : split_tokens(normalize_phrase(line))) list.words.insert(std::move(token));
  }
  list.normalize();
  return list;
}

StopwordList load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(detail::read_file(path));
}

std::string StemExceptionList::apply(std::string token) const {
  if (const auto it = restore.find(token); it != restore.end()) return it->second;
  return token;
}

StemExceptionList parse_stem_exceptions(std::string_view content, std::string_view source_name) {
  StemExceptionList list;
  const auto lines = detail::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto columns = detail::split_on(lines[i], '\t');
    if (columns.size() != 2) {
      throw InputError(located(source_name, i + 1, "expected 2 tab-separated columns"));
    }
    const std::string from = normalize_phrase(columns[0]);
    const std::string to = normalize_phrase(columns[1]);
    if (from.empty() || to.empty() || from.find(' ') != std::string::npos ||
        to.find(' ') != std::string::npos) {
      throw InputError(located(source_name, i + 1, "stem exceptions map one token to one token"));
    }
    list.restore[from] = to;
  }
  return list;
}

StemExceptionList load_stem_exceptions(const std::filesystem::path& path) {
  return parse_stem_exceptions(detail::read_file(path), path.string());
}

std::string treat_phrase(std::string_view phrase, const StopwordList* stopwords,
                         const StemExceptionList* exceptions) {
  std::vector<std::string> kept;
  for (auto& token : split_tokens(normalize_phrase(phrase))) {
    if (stopwords && stopwords->is_stopword(token)) continue;
    std::string stemmed = porter_stem(token);
    kept.push_back(exceptions ? exceptions->apply(std::move(stemmed)) : std::move(stemmed));
  }
  return join_tokens(kept);
}

// ---------------------------------------------------------------------------
// CategoryIndex

CategoryIndex::CategoryIndex(const std::vector<CategoryLexicon>& lexicons) {
  std::map<std::string, std::set<Category>> claims;
  for (const auto& lexicon : lexicons) {
    for (const auto& phrase : lexicon.entries) claims[phrase].insert(lexicon.category);
  }
  std::string overlaps;
  for (const auto& [phrase, categories] : claims) {
    if (categories.size() > 1) {
      overlaps += overlaps.empty() ? "" : ", ";
      overlaps += "'" + phrase + "' (";
      bool first = true;
      for (Category c : categories) {
        overlaps += first ? "" : "/";
        overlaps += category_tag(c);
        first = false;
      }
      overlaps += ")";
    }
  }
  if (!overlaps.empty()) throw InputError("category lexicons overlap: " + overlaps);

  for (const auto& [phrase, categories] : claims) {
    phrases_.emplace(phrase, *categories.begin());
    longest_ = std::max(longest_, split_tokens(phrase).size());
  }
}

std::optional<CategoryIndex::Match> CategoryIndex::match(const std::vector<std::string>& tokens,
                                                         std::size_t index,
                                                         std::size_t end) const {
  end = std::min(end, tokens.size());
  if (index >= end) return std::nullopt;
  const std::size_t max_span = std::min(longest_, end - index);
  for (std::size_t span = max_span; span >= 1; --span) {
    if (const auto category = find(join_tokens(tokens, index, span))) {
      return Match{*category, span};
    }
  }
  return std::nullopt;
}

std::optional<Category> CategoryIndex::find(std::string_view phrase) const {
  if (const auto it = phrases_.find(phrase); it != phrases_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LexiconBundle

LexiconBundle::LexiconBundle(LocationLexicon locations, std::vector<CategoryLexicon> categories,
                             StopwordList stopwords, StemExceptionList exceptions)
    : locations_(std::move(locations)),
      categories_(std::move(categories)),
      stopwords_(std::move(stopwords)),
      exceptions_(std::move(exceptions)) {
  stopwords_.normalize();
  locations_.validate();

  // The token stream reaching homogenization is stopword-filtered and stemmed,
  // so every surface key also gets its treated spelling.
  std::vector<std::pair<std::string, LocationEntry>> aliases;
  for (const auto& [surface, entry] : locations_.entries()) {
    std::string treated = treat_phrase(surface, &stopwords_, &exceptions_);
    if (!treated.empty() && treated != surface) aliases.emplace_back(std::move(treated), entry);
  }
  for (const auto& [treated, entry] : aliases) locations_.add_alias(treated, entry);

  for (auto& lexicon : categories_) {
    std::set<std::string> restored;
    for (const auto& phrase : lexicon.entries) {
      auto tokens = split_tokens(phrase);
      for (auto& token : tokens) token = exceptions_.apply(std::move(token));
      restored.insert(join_tokens(tokens));
    }
    lexicon.entries = std::move(restored);
  }
  category_index_ = CategoryIndex(categories_);
}

LexiconBundle LexiconBundle::load_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError("lexicon directory not found: " + dir.string());

  const fs::path locations_path = dir / "locations.tsv";
  if (!fs::exists(locations_path)) {
    throw InputError("missing location lexicon: " + locations_path.string());
  }
  LocationLexicon locations = load_location_lexicon(locations_path);

  // Stopword file words are read before the preserved set is applied, so a
  // custom preserved.txt can release a preposition back to the stoplist.
  StopwordList stopwords = StopwordList::with_defaults();
  if (fs::exists(dir / "stopwords.txt")) {
    for (const auto line : detail::split_lines(detail::read_file(dir / "stopwords.txt"))) {
      if (is_comment_or_blank(line)) continue;
      for (auto& token : split_tokens(normalize_phrase(line))) stopwords.words.insert(std::move(token));
    }
  }
  if (fs::exists(dir / "preserved.txt")) {
    stopwords.preserved.clear();
    for (const auto line : detail::split_lines(detail::read_file(dir / "preserved.txt"))) {
      if (is_comment_or_blank(line)) continue;
      for (auto& token : split_tokens(normalize_phrase(line))) {
        stopwords.preserved.insert(std::move(token));
      }
    }
  }
  stopwords.normalize();

  StemExceptionList exceptions;
  if (fs::exists(dir / "stem_exceptions.tsv")) {
    exceptions = load_stem_exceptions(dir / "stem_exceptions.tsv");
  }

  std::vector<CategoryLexicon> categories;
  for (Category category : kAllCategories) {
    std::string stem(category_tag(category));
    std::transform(stem.begin(), stem.end(), stem.begin(), [](char c) {
      return c == '-' ? '_' : static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    });
    const fs::path path = dir / (stem + ".txt");
    if (fs::exists(path)) categories.push_back(load_category_lexicon(path, category));
  }

  return LexiconBundle(std::move(locations), std::move(categories), std::move(stopwords),
                       std::move(exceptions));
}

// ---------------------------------------------------------------------------

std::optional<LocationMatch> resolve_location(const std::vector<std::string>& tokens,
                                              std::size_t index,
                                              const LocationLexicon& lexicon) {
  if (index >= tokens.size()) throw std::out_of_range("resolve_location: index past end");
  const std::size_t max_span = std::min(kMaxPhraseTokens, tokens.size() - index);
  for (std::size_t span = max_span; span >= 1; --span) {
    if (const auto* entry = lexicon.find(join_tokens(tokens, index, span))) {
      return LocationMatch{entry->province, entry->level, span};
    }
  }
  return std::nullopt;
}

}  // namespace geoloc
