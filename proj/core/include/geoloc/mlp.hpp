#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geoloc/design_matrix.hpp"

namespace geoloc {

struct MlpParams {
  std::vector<std::size_t> hidden_grid{3, 5, 7, 9};
  std::vector<double> decay_grid{0.0, 1e-3, 1e-2, 1e-1};
  std::size_t epochs = 2000;
  double learning_rate = 0.5;
  double momentum = 0.9;
  /// Share of rows (or groups, when given) held out to pick the grid point.
  double validation_fraction = 0.25;
  std::uint64_t seed = 1;

  bool operator==(const MlpParams&) const = default;
};

/// One hidden logistic layer, logistic output.
struct MlpModel {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  double decay = 0;
  std::vector<double> w1;  // hidden x inputs, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0;

  double predict_proba(const double* x) const;

  bool operator==(const MlpModel&) const = default;
};

/// Weights uniform in [-0.5, 0.5], biases zero.
MlpModel init_mlp(std::size_t inputs, std::size_t hidden, double decay, std::uint64_t seed);

/// Mean cross-entropy plus decay * (|W1|^2 + |w2|^2); biases are not decayed.
/// When `grad` is given it receives the gradient in the model's layout.
double mlp_loss(const MlpModel& model, const Matrix& x, const std::vector<int>& y,
                MlpModel* grad = nullptr);

/// Full-batch gradient descent with momentum from `init`. Throws
/// TrainingError if the loss stops being finite.
MlpModel fit_mlp(MlpModel init, const Matrix& x, const std::vector<int>& y, std::size_t epochs,
                 double learning_rate, double momentum);

struct MlpGridPoint {
  std::size_t hidden = 0;
  double decay = 0;
  double validation_accuracy = 0;
  double validation_loss = 0;
};

/// Fits every (hidden, decay) pair on the training part of an inner split,
/// keeps the one with the best validation accuracy (then lower validation
/// loss, then grid order) and refits it on all rows. `groups`, if non-empty,
/// keeps rows sharing a group on the same side of the split.
MlpModel train_mlp(const Matrix& x, const std::vector<int>& y, const MlpParams& params,
                   const std::vector<std::string>& groups = {},
                   std::vector<MlpGridPoint>* grid = nullptr);

}  // namespace geoloc
