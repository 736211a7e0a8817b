#include <gtest/gtest.h>

#include <filesystem>

#include "geoloc/baselines.hpp"
#include "geoloc/corpus_io.hpp"
#include "geoloc/error.hpp"

using namespace geoloc;

namespace {

const std::filesystem::path kFixtures = GEOLOC_FIXTURE_DIR;

std::vector<TreatedDocument> fixture(const char* name) {
  static const LexiconBundle bundle = LexiconBundle::load_directory(kFixtures / "china");
  return treat_corpus(load_corpus(kFixtures / name), bundle);
}

TreatedDocument flat(std::vector<std::string> tokens, std::vector<std::pair<std::string, std::size_t>> at) {
  TreatedDocument doc{"d", {std::move(tokens)}, {}, {}};
  for (const auto& [canonical, index] : at) doc.mentions.push_back({canonical, Level::province, 0, index, canonical});
  return doc;
}

}  // namespace

TEST(DictionaryBaseline, PredictsEveryRowPositive) {
  const std::vector<FeatureRow> rows{{"a", "x", 1, {}}, {"a", "y", 0, {}}};
  EXPECT_EQ(dictionary_baseline(rows), (std::vector<int>{1, 1}));
  EXPECT_TRUE(dictionary_baseline({}).empty());
}

TEST(NearestVerbBaseline, PicksDatelineNextToVerb) {
  const auto docs = fixture("dateline_strike.jsonl");
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(nearest_verb_baseline(docs[0]), "beijing");
  EXPECT_EQ(docs[0].labels.at("guangdong"), 1);
}

TEST(NearestVerbBaseline, TiesAndMissingVerbs) {
  EXPECT_EQ(nearest_verb_baseline(flat({"alpha", "ACTION-VERB", "beta"}, {{"alpha", 0}, {"beta", 2}})), "alpha");
  EXPECT_EQ(nearest_verb_baseline(flat({"alpha", "x", "beta", "ACTION-VERB"}, {{"alpha", 0}, {"beta", 2}})), "beta");
  EXPECT_EQ(nearest_verb_baseline(flat({"alpha", "beta"}, {{"alpha", 0}, {"beta", 1}})), "alpha");
  EXPECT_EQ(nearest_verb_baseline(flat({"alpha"}, {{"alpha", 0}})), "alpha");
  EXPECT_FALSE(nearest_verb_baseline(flat({"x"}, {})));
}

TEST(NearestVerbBaseline, DistanceCrossesSentences) {
  TreatedDocument doc{"d", {{"alpha", "x", "x"}, {"ACTION-VERB"}, {"x", "x", "beta"}}, {}, {}};
  doc.mentions = {{"alpha", Level::province, 0, 0, "alpha"}, {"beta", Level::province, 2, 2, "beta"}};
  // alpha is 3 tokens before the verb, beta 3 after; the earlier one wins.
  EXPECT_EQ(nearest_verb_baseline(doc), "alpha");
  doc.sentences[0].erase(doc.sentences[0].begin() + 1);
  doc.sentences[2].erase(doc.sentences[2].begin());
  doc.mentions[1].token_idx = 1;
  EXPECT_EQ(nearest_verb_baseline(doc), "alpha");
}

TEST(FocusBaseline, MostSentencesWins) {
  EXPECT_EQ(focus_baseline(fixture("railway_blockade.jsonl").at(0)), "heilongjiang");
  TreatedDocument tie{"d", {{"alpha"}, {"beta"}}, {}, {}};
  tie.mentions = {{"alpha", Level::province, 0, 0, "alpha"}, {"beta", Level::province, 1, 0, "beta"}};
  EXPECT_EQ(focus_baseline(tie), "alpha");
  EXPECT_FALSE(focus_baseline(flat({"x"}, {})));
}

TEST(BaselinePredictions, AlignsWithRows) {
  const auto docs = fixture("railway_blockade.jsonl");
  const std::vector<FeatureRow> rows{{"railway_blockade", "heilongjiang", 1, {}}, {"railway_blockade", "beijing", 0, {}}};
  EXPECT_EQ(baseline_predictions(Baseline::focus, rows, docs), (std::vector<int>{1, 0}));
  EXPECT_EQ(baseline_predictions(Baseline::dictionary, rows, docs), (std::vector<int>{1, 1}));
  const std::vector<FeatureRow> orphan{{"other", "beijing", 0, {}}};
  EXPECT_THROW(baseline_predictions(Baseline::nearest_verb, orphan, docs), PredictionError);
}
