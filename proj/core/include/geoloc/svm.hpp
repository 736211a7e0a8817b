#pragma once

#include <cstddef>
#include <vector>

#include "geoloc/design_matrix.hpp"

namespace geoloc {

struct SvmParams {
  double C = 1.0;
  /// RBF width; 0 means 1 / number of features.
  double gamma = 0.0;
  double tol = 1e-3;
  std::size_t max_iter = 1'000'000;

  bool operator==(const SvmParams&) const = default;
};

struct SvmModel {
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i, y in {-1, +1}
  double bias = 0;           // decision = sum coef_i K(sv_i, x) + bias
  double gamma = 0;
  double C = 0;
  double platt_a = 0;  // P(y=1 | f) = 1 / (1 + exp(a f + b))
  double platt_b = 0;

  double decision(const double* x) const;
  double predict_proba(const double* x) const;

  bool operator==(const SvmModel&) const = default;
};

/// Solver state after training, for inspection.
struct SvmTrace {
  std::vector<double> alpha;      // one multiplier per training row
  std::vector<double> objective;  // dual objective after every update
  std::size_t iterations = 0;
  double gap = 0;  // final maximal KKT violation m(alpha) - M(alpha)
};

double rbf_kernel(const double* a, const double* b, std::size_t dim, double gamma);

/// C-SVC dual solved by SMO with second-order working-set selection, followed
/// by Platt scaling on the training decision values. Throws TrainingError on
/// single-class data or when max_iter passes without reaching tol.
SvmModel train_svm_rbf(const Matrix& x, const std::vector<int>& y, const SvmParams& params,
                       SvmTrace* trace = nullptr);

/// Sigmoid fit of Lin, Lin and Weng (Newton with backtracking) on decision
/// values; returns (a, b).
std::pair<double, double> fit_platt(const std::vector<double>& decision, const std::vector<int>& y);

}  // namespace geoloc
