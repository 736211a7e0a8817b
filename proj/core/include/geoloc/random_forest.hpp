#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geoloc/design_matrix.hpp"

namespace geoloc {

struct ForestParams {
  std::size_t n_trees = 1000;
  /// Features drawn per split; 0 means ceil(sqrt(p)).
  std::size_t features_per_split = 0;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  bool operator==(const ForestParams&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;  // x[feature] <= threshold
  int right = -1;
  double value = 0;  // fraction of positive training rows reaching the leaf

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t leaf(const double* x) const;
  double predict(const double* x) const { return nodes[leaf(x)].value; }

  bool operator==(const DecisionTree&) const = default;
};

struct RandomForestModel {
  std::vector<DecisionTree> trees;
  std::size_t n_features = 0;
  ForestParams params;

  /// Mean of the tree leaf fractions.
  double predict_proba(const double* x) const;

  bool operator==(const RandomForestModel&) const = default;
};

/// Rows drawn (with replacement) for tree `tree`; a pure function of the seed.
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t forest_seed, std::size_t tree);

/// Gini-split trees on bootstrap samples. Throws TrainingError when fewer than
/// two rows or only one class is present.
RandomForestModel train_random_forest(const Matrix& x, const std::vector<int>& y,
                                      const ForestParams& params);

/// Out-of-bag permutation importance: for each feature, the mean drop in
/// out-of-bag accuracy of a tree when that feature is shuffled among its
/// out-of-bag rows. Trees without out-of-bag rows are skipped.
std::vector<double> permutation_importance(const RandomForestModel& forest, const Matrix& x,
                                           const std::vector<int>& y);

}  // namespace geoloc
