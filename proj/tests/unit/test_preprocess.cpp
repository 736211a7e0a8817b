#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "geoloc/corpus_io.hpp"
#include "geoloc/features.hpp"
#include "geoloc/preprocess.hpp"
#include "geoloc/rng.hpp"

using namespace geoloc;

namespace {

const std::filesystem::path kFixtures = GEOLOC_FIXTURE_DIR;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const LexiconBundle& china() {
  static const LexiconBundle bundle = LexiconBundle::load_directory(kFixtures / "china");
  return bundle;
}

LexiconBundle kivu() {
  LocationLexicon locations = parse_location_lexicon(
      "north kivu\tnorth kivu\nbeni\tnorth kivu\ngoma\tnorth kivu\nkinshasa\tkinshasa\n"
      "south kivu\tsouth kivu\nbukavu\tsouth kivu\n");
  std::vector<CategoryLexicon> categories{
      parse_category_lexicon("rebels\nsoldier\ncivilian\n", Category::actor),
      parse_category_lexicon("attack\nkill\nclash\n", Category::action_verb),
      parse_category_lexicon("said\n", Category::nontopic),
      parse_category_lexicon("dec\njanuary\n", Category::month),
      parse_category_lexicon("province\n", Category::admin)};
  return LexiconBundle(std::move(locations), std::move(categories), parse_stopwords("the\na\nand\n"), {});
}

TreatedDocument treat(const std::string& text, const LexiconBundle& bundle) {
  return treat_document(Document{"d", text, std::nullopt, {}}, bundle);
}

}  // namespace

TEST(Preprocess, CustodyDeathMatchesGolden) {
  const auto docs = treat_corpus(load_corpus(kFixtures / "custody_death.jsonl"), china());
  EXPECT_EQ(serialize_treated(docs), slurp(kFixtures / "golden" / "custody_death.treated.jsonl"));
}

TEST(Preprocess, RailwayBlockadeMatchesGolden) {
  const auto docs = treat_corpus(load_corpus(kFixtures / "railway_blockade.jsonl"), china());
  EXPECT_EQ(serialize_treated(docs), slurp(kFixtures / "golden" / "railway_blockade.treated.jsonl"));
}

TEST(Preprocess, RailwayBlockadeSentenceCounts) {
  const auto docs = treat_corpus(load_corpus(kFixtures / "railway_blockade.jsonl"), china());
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].sentences.size(), 7u);
  EXPECT_EQ(sentence_frequency(docs[0], "heilongjiang"), 3u);
  EXPECT_EQ(sentence_frequency(docs[0], "beijing"), 2u);
  EXPECT_EQ(docs[0].canonicals(), (std::vector<std::string>{"heilongjiang", "beijing"}));
}

TEST(Preprocess, DatelineBecomesMonthDateSource) {
  const auto doc = treat("BEIJING, Dec 4 (AFP) -- More than 500 people protested.", china());
  ASSERT_EQ(doc.sentences.size(), 1u);
  const Sentence expected{"beijing", "MONTH", "DATE", "SOURCE", "NUMERAL", "ACTOR", "ACTION-VERB"};
  EXPECT_EQ(doc.sentences[0], expected);
}

TEST(Preprocess, NumbersAndDates) {
  const auto bundle = kivu();
  EXPECT_EQ(treat("rebels attacked on 4 Dec", bundle).sentences[0],
            (Sentence{"ACTOR", "ACTION-VERB", "on", "DATE", "MONTH"}));
  EXPECT_EQ(treat("Dec 2000 saw 3 hundred soldiers", bundle).sentences[0],
            (Sentence{"MONTH", "NUMERAL", "saw", "NUMERAL", "ACTOR"}));
  EXPECT_EQ(treat("January 45 civilians", bundle).sentences[0],
            (Sentence{"MONTH", "NUMERAL", "ACTOR"}));
}

TEST(Preprocess, MultiWordProvinceBecomesOneToken) {
  const auto doc = treat("Rebels attacked Beni in North Kivu province.", kivu());
  ASSERT_EQ(doc.sentences.size(), 1u);
  EXPECT_EQ(doc.sentences[0],
            (Sentence{"ACTOR", "ACTION-VERB", "sub-north_kivu", "in", "north_kivu", "ADMIN"}));
  ASSERT_EQ(doc.mentions.size(), 2u);
  EXPECT_EQ(doc.mentions[0].canonical, "north kivu");
  EXPECT_EQ(doc.mentions[0].level, Level::subprovince);
  EXPECT_EQ(doc.mentions[0].token_idx, 2u);
  EXPECT_EQ(doc.mentions[1].token_idx, 4u);
}

TEST(Preprocess, EmptySentencesAreDropped) {
  const auto doc = treat("The. A. Rebels attacked Goma.", kivu());
  ASSERT_EQ(doc.sentences.size(), 1u);
  EXPECT_EQ(doc.mentions.at(0).sentence_idx, 0u);
}

// Every mention must address the token that stands for it.
TEST(PreprocessProperty, MentionsPointAtTheirTokens) {
  const auto bundle = kivu();
  Rng rng(3);
  const char* words[] = {"rebels", "attacked", "the", "in", "of", "Beni", "Goma", "North Kivu",
                         "Kinshasa", "said", "Dec", "4", "two", "South", "Kivu", "province", "."};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto length = rng.below(40);
    for (std::uint64_t i = 0; i < length; ++i) text += std::string(words[rng.below(std::size(words))]) + " ";
    const auto doc = treat(text, bundle);
    for (const auto& m : doc.mentions) {
      ASSERT_LT(m.sentence_idx, doc.sentences.size());
      ASSERT_LT(m.token_idx, doc.sentences[m.sentence_idx].size());
      std::string token = m.canonical;
      std::replace(token.begin(), token.end(), ' ', '_');
      if (m.level == Level::subprovince) token = "sub-" + token;
      EXPECT_EQ(doc.sentences[m.sentence_idx][m.token_idx], token) << text;
    }
    for (const auto& sentence : doc.sentences) {
      EXPECT_FALSE(sentence.empty());
      for (std::size_t t = 1; t < sentence.size(); ++t) {
        EXPECT_FALSE(sentence[t] == "NUMERAL" && sentence[t - 1] == "NUMERAL") << text;
      }
    }
  }
}

// The number of mentions equals a brute-force leftmost-longest scan of the
// stopword-filtered, stemmed sentences over every substring.
TEST(PreprocessProperty, MentionCountMatchesQuadraticScan) {
  const auto bundle = kivu();
  Rng rng(11);
  const char* words[] = {"north", "south", "kivu", "beni", "goma", "kinshasa", "rebels", "the", "x"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto length = 1 + rng.below(30);
    for (std::uint64_t i = 0; i < length; ++i) text += std::string(words[rng.below(std::size(words))]) + " ";

    std::size_t expected = 0;
    for (const auto& sentence : split_sentences(clean_text(text))) {
      const auto tokens = stem_tokens(remove_stopwords(sentence, bundle.stopwords()), bundle.stem_exceptions());
      std::size_t i = 0;
      while (i < tokens.size()) {
        std::size_t best = 0;
        for (std::size_t j = i + 1; j <= tokens.size(); ++j) {
          std::string phrase;
          for (std::size_t t = i; t < j; ++t) phrase += (t > i ? " " : "") + tokens[t];
          if (bundle.locations().find(phrase)) best = j - i;
        }
        if (best > 0) {
          ++expected;
          i += best;
        } else {
          ++i;
        }
      }
    }
    EXPECT_EQ(treat(text, bundle).mentions.size(), expected) << text;
  }
}

TEST(PreprocessProperty, GeneralizationIsIdempotent) {
  const auto docs = treat_corpus(load_corpus(kFixtures / "railway_blockade.jsonl"), china());
  TokenStream once{docs[0].sentences, docs[0].mentions};
  const TokenStream twice = generalize_tokens(once, china().category_index());
  EXPECT_EQ(twice, once);
}

TEST(Preprocess, TreatCorpusIsOrderPreservingAcrossJobs) {
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i) {
    docs.push_back({"s" + std::to_string(i), "Rebels attacked Goma " + std::to_string(i) + " times.", std::nullopt, {}});
  }
  EXPECT_EQ(treat_corpus(docs, kivu(), 1), treat_corpus(docs, kivu(), 4));
}

TEST(TagToken, RecognisesTags) {
  EXPECT_TRUE(is_tag_token("ACTION-VERB"));
  EXPECT_TRUE(is_tag_token("SUB-LOCATION"));
  EXPECT_FALSE(is_tag_token("sub-heilongjiang"));
  EXPECT_FALSE(is_tag_token(""));
}
