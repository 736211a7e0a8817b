#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoloc/lexicon.hpp"
#include "geoloc/text.hpp"

namespace geoloc {

/// Prefix marking a subprovince mention rewritten to its parent province.
inline constexpr std::string_view kSubPrefix = "sub-";

struct Document {
  std::string story_id;
  std::string raw_text;
  std::optional<std::string> source_tag;
  /// Human coding: canonical province -> 1 (correct event location) or 0.
  std::map<std::string, int> labels;
};

struct LocationMention {
  std::string canonical;
  Level level = Level::province;
  std::size_t sentence_idx = 0;
  std::size_t token_idx = 0;
  /// The matched phrase as it appeared in the stemmed stream.
  std::string surface;

  bool operator==(const LocationMention&) const = default;
};

/// Sentences plus the location mentions addressing tokens inside them.
struct TokenStream {
  std::vector<Sentence> sentences;
  std::vector<LocationMention> mentions;

  bool operator==(const TokenStream&) const = default;
};

struct TreatedDocument {
  std::string story_id;
  std::vector<Sentence> sentences;
  std::vector<LocationMention> mentions;
  std::map<std::string, int> labels;

  bool operator==(const TreatedDocument&) const = default;

  /// Distinct canonical provinces in order of first mention.
  std::vector<std::string> canonicals() const;
  bool mentions_canonical(std::string_view canonical) const;
};

Sentence remove_stopwords(const Sentence& tokens, const StopwordList& stoplist);

Sentence stem_tokens(const Sentence& tokens, const StemExceptionList& exceptions);

/// Replaces each gazetteer phrase (longest match, left to right) by one token:
/// `<province>` for province-level names, `sub-<province>` for subprovinces.
/// Spaces inside a multi-word province name become underscores in the token.
TokenStream homogenize_locations(std::vector<Sentence> sentences, const LocationLexicon& lexicon);

/// Replaces lexicon phrases by category tags, digit runs and number words by
/// NUMERAL (adjacent numerals merge), and day numbers next to a month by DATE.
/// Mention tokens are never touched; mention indices are remapped.
TokenStream generalize_tokens(TokenStream stream, const CategoryIndex& categories);

/// clean -> split -> stopwords -> stem -> homogenize -> generalize.
TreatedDocument treat_document(const Document& doc, const LexiconBundle& bundle);

/// Treats every document, `jobs` at a time; output order matches input.
std::vector<TreatedDocument> treat_corpus(const std::vector<Document>& docs,
                                          const LexiconBundle& bundle, unsigned jobs = 1);

/// True for category tags and placeholders ("ACTOR", "NUMERAL", ...).
bool is_tag_token(std::string_view token);

}  // namespace geoloc
