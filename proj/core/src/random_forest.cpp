#include "geoloc/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoloc/error.hpp"
#include "geoloc/parallel.hpp"
#include "geoloc/rng.hpp"

namespace geoloc {
namespace {

constexpr std::uint64_t kFeatureStream = 0x6a09e667f3bcc909ULL;
constexpr std::uint64_t kPermuteStream = 0xbb67ae8584caa73bULL;

double gini(double positives, double total) {
  if (total <= 0) return 0;
  const double p = positives / total;
  return 2.0 * p * (1.0 - p);
}

struct Split {
  int feature = -1;
  double threshold = 0;
  double impurity = 0;  // weighted child impurity
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<int>& y, std::size_t mtry, std::size_t min_leaf,
              std::uint64_t seed)
      : x_(x), y_(y), mtry_(mtry), min_leaf_(min_leaf), rng_(seed) {}

  DecisionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(rows);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t>& rows) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double positives = 0;
    for (std::size_t r : rows) positives += y_[r];
    const double total = static_cast<double>(rows.size());
    tree_.nodes[index].value = positives / total;

    if (positives == 0 || positives == total || rows.size() < 2 * min_leaf_) return index;
    const Split split = find_split(rows, positives);
    if (split.feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (x_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    tree_.nodes[index].feature = split.feature;
    tree_.nodes[index].threshold = split.threshold;
    const int l = grow(left);
    tree_.nodes[index].left = l;
    const int r = grow(right);
    tree_.nodes[index].right = r;
    return index;
  }

  // Tries mtry features in random order; if none of them separates the rows,
  // keeps drawing from the remaining features until one does.
  Split find_split(const std::vector<std::size_t>& rows, double positives) {
    std::vector<std::size_t> order(x_.cols);
    std::iota(order.begin(), order.end(), 0);
    Split best;
    for (std::size_t tried = 0; tried < order.size(); ++tried) {
      const std::size_t pick = tried + static_cast<std::size_t>(rng_.below(order.size() - tried));
      std::swap(order[tried], order[pick]);
      evaluate(rows, positives, order[tried], best);
      if (tried + 1 >= mtry_ && best.feature >= 0) break;
    }
    return best;
  }

  void evaluate(const std::vector<std::size_t>& rows, double positives, std::size_t feature,
                Split& best) {
    sorted_.assign(rows.begin(), rows.end());
    std::stable_sort(sorted_.begin(), sorted_.end(), [&](std::size_t a, std::size_t b) {
      return x_(a, feature) < x_(b, feature);
    });
    const std::size_t n = sorted_.size();
    const double total = static_cast<double>(n);
    double left_pos = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_pos += y_[sorted_[i]];
      const double lo = x_(sorted_[i], feature);
      const double hi = x_(sorted_[i + 1], feature);
      if (!(lo < hi)) continue;
      const std::size_t left_n = i + 1;
      if (left_n < min_leaf_ || n - left_n < min_leaf_) continue;
      const double ln = static_cast<double>(left_n);
      const double rn = total - ln;
      const double impurity = (ln * gini(left_pos, ln) + rn * gini(positives - left_pos, rn)) / total;
      if (best.feature < 0 || impurity < best.impurity) {
        double threshold = lo + (hi - lo) / 2;
        if (!(threshold < hi)) threshold = lo;
        best = {static_cast<int>(feature), threshold, impurity};
      }
    }
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  std::size_t mtry_;
  std::size_t min_leaf_;
  Rng rng_;
  DecisionTree tree_;
  std::vector<std::size_t> sorted_;
};

}  // namespace

std::size_t DecisionTree::leaf(const double* x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& node = nodes[i];
    i = static_cast<std::size_t>(x[node.feature] <= node.threshold ? node.left : node.right);
  }
  return i;
}

double RandomForestModel::predict_proba(const double* x) const {
  double sum = 0;
  for (const auto& tree : trees) sum += tree.predict(x);
  return trees.empty() ? 0.5 : sum / static_cast<double>(trees.size());
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t forest_seed, std::size_t tree) {
  Rng rng(derive_seed(forest_seed, tree));
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
  return rows;
}

RandomForestModel train_random_forest(const Matrix& x, const std::vector<int>& y,
                                      const ForestParams& params) {
  if (x.rows < 2) throw TrainingError("random forest needs at least two rows");
  if (y.size() != x.rows) throw TrainingError("label count does not match row count");
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw TrainingError("random forest needs both classes in the training data");
  }
  if (params.n_trees == 0) throw TrainingError("random forest needs at least one tree");
  if (x.cols == 0) throw TrainingError("random forest needs at least one feature");

  RandomForestModel model;
  model.params = params;
  model.n_features = x.cols;
  std::size_t mtry = params.features_per_split;
  if (mtry == 0) mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols))));
  mtry = std::min(mtry, x.cols);
  model.params.features_per_split = mtry;
  const std::size_t min_leaf = std::max<std::size_t>(1, params.min_leaf);
  model.params.min_leaf = min_leaf;

  model.trees.resize(params.n_trees);
  parallel_for(params.n_trees, params.jobs, [&](std::size_t t) {
    TreeBuilder builder(x, y, mtry, min_leaf, derive_seed(params.seed ^ kFeatureStream, t));
    model.trees[t] = builder.build(bootstrap_rows(x.rows, params.seed, t));
  });
  return model;
}

std::vector<double> permutation_importance(const RandomForestModel& forest, const Matrix& x,
                                           const std::vector<int>& y) {
  const std::size_t p = x.cols;
  std::vector<double> drop_sum(p, 0.0);
  std::size_t used = 0;
  std::vector<double> scratch(p);

  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    std::vector<char> in_bag(x.rows, 0);
    for (std::size_t r : bootstrap_rows(x.rows, forest.params.seed, t)) in_bag[r] = 1;
    std::vector<std::size_t> oob;
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (!in_bag[r]) oob.push_back(r);
    }
    if (oob.empty()) continue;
    ++used;

    const DecisionTree& tree = forest.trees[t];
    auto correct = [&](std::size_t r, const double* row) {
      return (tree.predict(row) >= 0.5 ? 1 : 0) == y[r];
    };
    double base = 0;
    for (std::size_t r : oob) base += correct(r, x.row(r));

    Rng rng(derive_seed(forest.params.seed ^ kPermuteStream, t));
    for (std::size_t f = 0; f < p; ++f) {
      std::vector<std::size_t> donors = oob;
      rng.shuffle(donors);
      double permuted = 0;
      for (std::size_t i = 0; i < oob.size(); ++i) {
        std::copy(x.row(oob[i]), x.row(oob[i]) + p, scratch.begin());
        scratch[f] = x(donors[i], f);
        permuted += correct(oob[i], scratch.data());
      }
      drop_sum[f] += (base - permuted) / static_cast<double>(oob.size());
    }
  }
  if (used > 0) {
    for (auto& d : drop_sum) d /= static_cast<double>(used);
  }
  return drop_sum;
}

}  // namespace geoloc
