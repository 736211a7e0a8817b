#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "geoloc/baselines.hpp"
#include "geoloc/error.hpp"
#include "geoloc/eval.hpp"
#include "geoloc/rng.hpp"
#include "geoloc/synthetic.hpp"
#include "oracles.hpp"

using namespace geoloc;

namespace {

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("story" + std::to_string(i));
  return out;
}

std::vector<std::size_t> fold_sizes(const CvPlan& plan, std::size_t repeat) {
  std::vector<std::size_t> sizes;
  for (std::size_t f = 0; f < plan.k; ++f) sizes.push_back(plan.test_stories(repeat, f).size());
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

ClassifierSpec quick(ModelKind kind) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.forest.n_trees = 30;
  spec.mlp.hidden_grid = {3};
  spec.mlp.decay_grid = {0.01};
  spec.mlp.epochs = 300;
  return spec;
}

const std::vector<TreatedDocument>& small_corpus() {
  static const std::vector<TreatedDocument> docs = [] {
    SyntheticOptions options;
    options.articles = 24;
    options.seed = 3;
    const auto synthetic = generate_synthetic(options);
    return treat_corpus(synthetic.docs, synthetic.bundle());
  }();
  return docs;
}

}  // namespace

TEST(CvPlan, FoldSizes) {
  EXPECT_EQ(fold_sizes(make_cv_plan(ids(9), 3, 3, 1), 0), (std::vector<std::size_t>{3, 3, 3}));
  const auto plan = make_cv_plan(ids(10), 3, 3, 1);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(fold_sizes(plan, r), (std::vector<std::size_t>{4, 3, 3}));
}

TEST(CvPlan, SameSeedSamePlan) {
  EXPECT_EQ(make_cv_plan(ids(20), 3, 3, 5).assignments, make_cv_plan(ids(20), 3, 3, 5).assignments);
  EXPECT_NE(make_cv_plan(ids(20), 3, 3, 5).assignments, make_cv_plan(ids(20), 3, 3, 6).assignments);
}

TEST(CvPlan, Errors) {
  EXPECT_THROW(make_cv_plan(ids(2), 3, 1, 0), InputError);
  EXPECT_THROW(make_cv_plan({"a", "a", "b"}, 2, 1, 0), InputError);
  EXPECT_THROW(make_cv_plan(ids(5), 1, 1, 0), InputError);
}

TEST(CvPlanProperty, EveryStoryInExactlyOneTestFoldPerRepeat) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    const auto story_ids = ids(k + rng.below(30));
    const auto plan = make_cv_plan(story_ids, k, 1 + rng.below(3), rng.next());
    for (std::size_t r = 0; r < plan.repeats; ++r) {
      std::map<std::string, int> seen;
      for (std::size_t f = 0; f < k; ++f) {
        for (const auto& id : plan.test_stories(r, f)) ++seen[id];
      }
      ASSERT_EQ(seen.size(), story_ids.size());
      for (const auto& [id, count] : seen) ASSERT_EQ(count, 1);
      const auto sizes = fold_sizes(plan, r);
      ASSERT_LE(sizes.front() - sizes.back(), 1u);
    }
  }
}

TEST(Confusion, AccuracyFromCounts) {
  Confusion c;
  c.add(1, 1);
  c.add(1, 0);
  c.add(0, 0);
  c.add(0, 0);
  EXPECT_EQ(c.total(), 4u);
  EXPECT_DOUBLE_EQ(c.accuracy(), 0.75);
}

TEST(Roc, PerfectSeparation) {
  const auto points = roc_points({{0.9, 1}, {0.1, 0}});
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[1].fpr, 0.0);
  EXPECT_EQ(points[1].tpr, 1.0);
  EXPECT_DOUBLE_EQ(auc(points), 1.0);
}

TEST(Roc, AllScoresEqual) {
  const auto points = roc_points({{0.4, 1}, {0.4, 0}, {0.4, 1}});
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].fpr, 0.0);
  EXPECT_EQ(points[0].tpr, 0.0);
  EXPECT_TRUE(std::isinf(points[0].threshold));
  EXPECT_EQ(points[1].fpr, 1.0);
  EXPECT_EQ(points[1].tpr, 1.0);
  EXPECT_DOUBLE_EQ(auc(points), 0.5);
}

TEST(Roc, SingleClassIsAnError) {
  EXPECT_THROW(roc_points({{0.2, 1}, {0.3, 1}}), EvaluationError);
}

TEST(RocProperty, MatchesThresholdSweep) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, int>> scores(20);
    for (auto& s : scores) s = {std::round(rng.uniform() * 8) / 8, static_cast<int>(rng.below(2))};
    scores[0].second = 0;
    scores[1].second = 1;
    const auto points = roc_points(scores);
    const auto expected = oracle::roc_sweep(scores);
    ASSERT_EQ(points.size(), expected.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      EXPECT_NEAR(points[i].fpr, expected[i].fpr, 1e-12);
      EXPECT_NEAR(points[i].tpr, expected[i].tpr, 1e-12);
      if (i > 0) {
        EXPECT_GE(points[i].fpr, points[i - 1].fpr);
        EXPECT_GE(points[i].tpr, points[i - 1].tpr);
      }
    }
    const double area = auc(points);
    EXPECT_GE(area, 0.0);
    EXPECT_LE(area, 1.0);
  }
}

TEST(ProvinceAggregate, CountsPositives) {
  EXPECT_TRUE(province_aggregate({}, {"m"}, {{}}).provinces.empty());
  const std::vector<FeatureRow> one{{"a", "alpha", 1, {}}, {"a", "beta", 0, {}}};
  const auto agg = province_aggregate(one, {"m"}, {{0, 0}});
  std::size_t truth = 0;
  for (const auto& p : agg.provinces) {
    truth += p.ground_truth;
    EXPECT_EQ(p.predicted.at(0), 0u);
  }
  EXPECT_EQ(truth, 1u);
}

TEST(ProvinceAggregate, DictionaryOverCountsTheCapital) {
  std::vector<FeatureRow> rows;
  for (int s = 0; s < 10; ++s) {
    rows.push_back({"s" + std::to_string(s), "beijing", s == 0 ? 1 : 0, {}});
    rows.push_back({"s" + std::to_string(s), s % 2 ? "guangdong" : "sichuan", 1, {}});
  }
  const auto agg = province_aggregate(rows, {"dictionary"}, {dictionary_baseline(rows)});
  const auto it = std::find_if(agg.provinces.begin(), agg.provinces.end(),
                               [](const ProvinceCount& p) { return p.province == "beijing"; });
  ASSERT_NE(it, agg.provinces.end());
  EXPECT_EQ(it->ground_truth, 1u);
  EXPECT_EQ(it->predicted[0], 10u);
}

TEST(SubsetAccuracy, EqualsOverallWhenEveryArticleHasOneTrueLocation) {
  const std::vector<FeatureRow> rows{{"a", "x", 1, {}}, {"a", "y", 0, {}}, {"b", "z", 1, {}}};
  const std::vector<int> predictions{1, 1, 0};
  EXPECT_DOUBLE_EQ(single_location_subset_accuracy(rows, predictions), row_accuracy(rows, predictions));
  EXPECT_EQ(single_location_rows(rows), 3u);
  EXPECT_DOUBLE_EQ(article_accuracy(rows, predictions), 0.0);
}

TEST(SubsetAccuracy, SkipsMultiLocationArticles) {
  const std::vector<FeatureRow> rows{{"a", "x", 1, {}}, {"a", "y", 1, {}}, {"b", "z", 1, {}}, {"b", "w", 0, {}}};
  EXPECT_DOUBLE_EQ(single_location_subset_accuracy(rows, {0, 0, 1, 0}), 1.0);
  EXPECT_EQ(single_location_rows(rows), 2u);
}

TEST(Accuracy, RandomPredictorNearHalfOnBalancedData) {
  Rng rng(4);
  std::vector<FeatureRow> rows;
  std::vector<int> predictions;
  for (int i = 0; i < 2000; ++i) {
    rows.push_back({"s" + std::to_string(i), "x", i % 2, {}});
    predictions.push_back(static_cast<int>(rng.below(2)));
  }
  EXPECT_NEAR(row_accuracy(rows, predictions), 0.5, 0.1);
}

TEST(RunCv, InvariantsOnSmallSyntheticCorpus) {
  const auto& docs = small_corpus();
  std::vector<std::string> story_ids;
  for (const auto& d : docs) story_ids.push_back(d.story_id);
  const auto plan = make_cv_plan(story_ids, 3, 3, 9);
  CvOptions options;
  options.classifiers = {quick(ModelKind::random_forest), quick(ModelKind::svm), quick(ModelKind::mlp)};
  options.jobs = 2;
  const auto report = run_cv(docs, plan, options);

  ASSERT_EQ(report.predictors.size(), 6u);
  EXPECT_EQ(report.folds.size(), 9u * 6u);
  EXPECT_EQ(report.audits.size(), 9u);
  for (const auto& audit : report.audits) {
    for (const auto& id : audit.test_stories) {
      EXPECT_EQ(std::count(audit.contributors.begin(), audit.contributors.end(), id), 0);
    }
  }
  for (const auto& fold : report.folds) {
    EXPECT_DOUBLE_EQ(fold.accuracy, fold.confusion.accuracy());
    std::size_t rows = 0;
    for (const auto& row : report.predictions) rows += row.repeat == fold.repeat && row.fold == fold.fold;
    EXPECT_EQ(fold.confusion.total(), rows);
  }
  for (const auto& summary : report.summary) {
    double sum = 0;
    std::size_t count = 0;
    for (const auto& fold : report.folds) {
      if (fold.predictor == summary.predictor) {
        sum += fold.accuracy;
        ++count;
      }
    }
    EXPECT_EQ(count, 9u);
    EXPECT_NEAR(summary.mean_accuracy, sum / 9.0, 1e-12);
  }
  // Running with a different thread count changes nothing.
  options.jobs = 1;
  const auto serial = run_cv(docs, plan, options);
  EXPECT_EQ(serial.summary.front().mean_accuracy, report.summary.front().mean_accuracy);
  EXPECT_EQ(serial.roc.size(), report.roc.size());
}

TEST(RunCv, FoldFailureCarriesContext) {
  const auto& docs = small_corpus();
  std::vector<std::string> story_ids;
  for (const auto& d : docs) story_ids.push_back(d.story_id);
  CvOptions options;
  auto spec = quick(ModelKind::svm);
  spec.svm.max_iter = 1;
  spec.svm.tol = 1e-12;
  options.classifiers = {spec};
  try {
    run_cv(docs, make_cv_plan(story_ids, 2, 1, 1), options);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("repeat 0 fold"), std::string::npos) << e.what();
  }
}
