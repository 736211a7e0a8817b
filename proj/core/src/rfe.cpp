#include "geoloc/rfe.hpp"

#include <algorithm>

#include "geoloc/design_matrix.hpp"
#include "geoloc/error.hpp"
#include "geoloc/random_forest.hpp"
#include "geoloc/rng.hpp"

namespace geoloc {
namespace {

bool single_class(const std::vector<int>& y) {
  return std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); });
}

// Pooled accuracy over grouped folds. A fold whose training part holds one
// class predicts that class.
double cv_accuracy(const DesignMatrix& dm, const std::vector<std::size_t>& fold_of, std::size_t folds,
                   const RfeParams& params) {
  std::size_t hits = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t r = 0; r < dm.x.rows; ++r) (fold_of[r] == f ? test : train).push_back(r);
    if (test.empty() || train.empty()) continue;

    Matrix xt(train.size(), dm.x.cols);
    std::vector<int> yt;
    for (std::size_t i = 0; i < train.size(); ++i) {
      std::copy(dm.x.row(train[i]), dm.x.row(train[i]) + dm.x.cols, xt.row(i));
      yt.push_back(dm.y[train[i]]);
    }
    if (xt.rows < 2 || single_class(yt)) {
      for (std::size_t r : test) hits += dm.y[r] == yt.front();
      continue;
    }
    ForestParams fp;
    fp.n_trees = params.n_trees;
    fp.seed = derive_seed(params.seed, f + 1);
    fp.jobs = params.jobs;
    const RandomForestModel forest = train_random_forest(xt, yt, fp);
    for (std::size_t r : test) hits += (forest.predict_proba(dm.x.row(r)) >= 0.5 ? 1 : 0) == dm.y[r];
  }
  return static_cast<double>(hits) / static_cast<double>(dm.x.rows);
}

}  // namespace

FeatureSubset rfe_select(const Dataset& data, const RfeParams& params) {
  if (data.feature_names.size() < 2) throw TrainingError("feature elimination needs two features");
  if (data.rows.size() < 2) throw TrainingError("feature elimination needs two rows");

  std::vector<std::string> stories;
  for (const auto& row : data.rows) stories.push_back(row.story_id);
  const auto assignment = grouped_folds(stories, std::max<std::size_t>(2, params.folds), params.seed);
  const std::size_t folds = std::min(std::max<std::size_t>(2, params.folds), assignment.size());
  if (folds < 2) throw TrainingError("feature elimination needs at least two stories");
  std::vector<std::size_t> fold_of;
  for (const auto& row : data.rows) fold_of.push_back(assignment.at(row.story_id) % folds);

  FeatureSubset result;
  std::vector<std::string> current = data.feature_names;
  while (!current.empty()) {
    const DesignMatrix dm = design_matrix(data, current, true);
    RfeStep step{current, cv_accuracy(dm, fold_of, folds, params), {}};

    if (current.size() > 1) {
      std::size_t drop = current.size() - 1;
      if (!single_class(dm.y)) {
        ForestParams fp;
        fp.n_trees = params.n_trees;
        fp.seed = params.seed;
        fp.jobs = params.jobs;
        const auto importance = permutation_importance(train_random_forest(dm.x, dm.y, fp), dm.x, dm.y);
        drop = static_cast<std::size_t>(std::min_element(importance.begin(), importance.end()) -
                                        importance.begin());
      }
      step.dropped = current[drop];
      current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    } else {
      current.clear();
    }
    result.steps.push_back(std::move(step));
  }

  const RfeStep* best = &result.steps.front();
  for (const auto& step : result.steps) {
    if (step.accuracy >= best->accuracy) best = &step;  // later steps are smaller
  }
  result.features = best->features;
  return result;
}

}  // namespace geoloc
