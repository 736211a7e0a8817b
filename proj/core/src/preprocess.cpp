#include "geoloc/preprocess.hpp"

#include <algorithm>
#include <set>

#include "geoloc/parallel.hpp"
#include "geoloc/porter_stemmer.hpp"

namespace geoloc {
namespace {

// Stemmed spellings of English number words. "one" is left out: its stem
// ("on") is indistinguishable from the preposition.
const std::set<std::string, std::less<>>& number_word_stems() {
  static const std::set<std::string, std::less<>> stems = [] {
    const char* words[] = {"zero",     "two",       "three",    "four",     "five",
                           "six",      "seven",     "eight",    "nine",     "ten",
                           "eleven",   "twelve",    "thirteen", "fourteen", "fifteen",
                           "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",
                           "thirty",   "forty",     "fifty",    "sixty",    "seventy",
                           "eighty",   "ninety",    "hundred",  "hundreds", "thousand",
                           "thousands", "million",  "millions", "billion",  "billions",
                           "dozen",    "dozens"};
    std::set<std::string, std::less<>> out;
    for (const char* w : words) out.insert(porter_stem(w));
    return out;
  }();
  return stems;
}

enum class ItemKind { word, mention, tag, month, digits, numeral };

struct Item {
  std::string token;
  ItemKind kind = ItemKind::word;
  std::size_t mention = 0;  // index into the mention list when kind == mention
};

bool is_day_number(std::string_view digits) {
  if (digits.size() > 2) return false;
  const int value = std::stoi(std::string(digits));
  return value >= 1 && value <= 31;
}

}  // namespace

bool is_tag_token(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return (c >= 'A' && c <= 'Z') || c == '-'; });
}

std::vector<std::string> TreatedDocument::canonicals() const {
  std::vector<std::string> out;
  for (const auto& mention : mentions) {
    if (std::find(out.begin(), out.end(), mention.canonical) == out.end()) {
      out.push_back(mention.canonical);
    }
  }
  return out;
}

bool TreatedDocument::mentions_canonical(std::string_view canonical) const {
  return std::any_of(mentions.begin(), mentions.end(),
                     [&](const LocationMention& m) { return m.canonical == canonical; });
}

Sentence remove_stopwords(const Sentence& tokens, const StopwordList& stoplist) {
  Sentence kept;
  kept.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (stoplist.preserved.count(token) || !stoplist.is_stopword(token)) kept.push_back(token);
  }
  return kept;
}

Sentence stem_tokens(const Sentence& tokens, const StemExceptionList& exceptions) {
  Sentence stemmed;
  stemmed.reserve(tokens.size());
  for (const auto& token : tokens) stemmed.push_back(exceptions.apply(porter_stem(token)));
  return stemmed;
}

TokenStream homogenize_locations(std::vector<Sentence> sentences, const LocationLexicon& lexicon) {
  TokenStream out;
  out.sentences.reserve(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Sentence& tokens = sentences[s];
    Sentence rewritten;
    rewritten.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
      const auto match = resolve_location(tokens, i, lexicon);
      if (!match) {
        rewritten.push_back(tokens[i]);
        ++i;
        continue;
      }
      out.mentions.push_back(LocationMention{match->province, match->level, s, rewritten.size(),
                                             join_tokens(tokens, i, match->span)});
      std::string token = match->province;
      std::replace(token.begin(), token.end(), ' ', '_');
      rewritten.push_back(match->level == Level::province ? token : std::string(kSubPrefix) + token);
      i += match->span;
    }
    out.sentences.push_back(std::move(rewritten));
  }
  return out;
}

TokenStream generalize_tokens(TokenStream stream, const CategoryIndex& categories) {
  const auto& number_words = number_word_stems();
  const auto month_tag = category_tag(Category::month);

  TokenStream out;
  out.mentions = stream.mentions;
  out.sentences.reserve(stream.sentences.size());

  for (std::size_t s = 0; s < stream.sentences.size(); ++s) {
    const Sentence& tokens = stream.sentences[s];
    std::vector<std::size_t> mention_at(tokens.size(), static_cast<std::size_t>(-1));
    for (std::size_t m = 0; m < stream.mentions.size(); ++m) {
      const auto& mention = stream.mentions[m];
      if (mention.sentence_idx == s && mention.token_idx < tokens.size()) {
        mention_at[mention.token_idx] = m;
      }
    }

    std::vector<Item> items;
    items.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
      if (mention_at[i] != static_cast<std::size_t>(-1)) {
        items.push_back({tokens[i], ItemKind::mention, mention_at[i]});
        ++i;
        continue;
      }
      std::size_t next_mention = i;
      while (next_mention < tokens.size() &&
             mention_at[next_mention] == static_cast<std::size_t>(-1)) {
        ++next_mention;
      }
      if (const auto match = categories.match(tokens, i, next_mention)) {
        const auto tag = category_tag(match->category);
        items.push_back({std::string(tag),
                         match->category == Category::month ? ItemKind::month : ItemKind::tag});
        i += match->span;
        continue;
      }
      const std::string& token = tokens[i];
      if (is_digit_run(token)) {
        items.push_back({token, ItemKind::digits});
      } else if (number_words.count(token)) {
        items.push_back({token, ItemKind::numeral});
      } else if (token == month_tag) {
        items.push_back({token, ItemKind::month});
      } else {
        items.push_back({token, is_tag_token(token) ? ItemKind::tag : ItemKind::word});
      }
      ++i;
    }

    // Day numbers touching a month become DATE.
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (items[k].kind != ItemKind::digits || !is_day_number(items[k].token)) continue;
      const bool month_before = k > 0 && items[k - 1].kind == ItemKind::month;
      const bool month_after = k + 1 < items.size() && items[k + 1].kind == ItemKind::month;
      if (month_before || month_after) {
        items[k].token = std::string(kDateTag);
        items[k].kind = ItemKind::tag;
      }
    }

    Sentence rewritten;
    rewritten.reserve(items.size());
    bool previous_numeral = false;
    for (const Item& item : items) {
      const bool numeral = item.kind == ItemKind::digits || item.kind == ItemKind::numeral;
      if (numeral) {
        if (!previous_numeral) rewritten.emplace_back(kNumeralTag);
        previous_numeral = true;
        continue;
      }
      previous_numeral = false;
      if (item.kind == ItemKind::mention) out.mentions[item.mention].token_idx = rewritten.size();
      rewritten.push_back(item.token);
    }
    out.sentences.push_back(std::move(rewritten));
  }
  return out;
}

TreatedDocument treat_document(const Document& doc, const LexiconBundle& bundle) {
  std::vector<Sentence> sentences;
  for (auto& sentence : split_sentences(clean_text(doc.raw_text))) {
    Sentence treated =
        stem_tokens(remove_stopwords(sentence, bundle.stopwords()), bundle.stem_exceptions());
    if (!treated.empty()) sentences.push_back(std::move(treated));
  }
  TokenStream stream = generalize_tokens(
      homogenize_locations(std::move(sentences), bundle.locations()), bundle.category_index());
  return TreatedDocument{doc.story_id, std::move(stream.sentences), std::move(stream.mentions),
                         doc.labels};
}

std::vector<TreatedDocument> treat_corpus(const std::vector<Document>& docs,
                                          const LexiconBundle& bundle, unsigned jobs) {
  std::vector<TreatedDocument> treated(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t i) { treated[i] = treat_document(docs[i], bundle); });
  return treated;
}

}  // namespace geoloc
