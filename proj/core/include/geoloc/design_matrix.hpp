#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geoloc/features.hpp"

namespace geoloc {

/// Dense row-major matrix of covariates.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
};

struct DesignMatrix {
  Matrix x;
  std::vector<int> y;  // empty unless labels were requested
  std::vector<std::string> features;
};

/// Selects `features` (in that order) from the dataset. Throws PredictionError
/// naming the first missing feature; with `require_labels`, throws
/// TrainingError naming the first unlabeled row.
DesignMatrix design_matrix(const Dataset& data, const std::vector<std::string>& features,
                           bool require_labels);

/// Shuffles the distinct ids and deals them round-robin into k folds.
std::map<std::string, std::size_t> grouped_folds(const std::vector<std::string>& ids, std::size_t k,
                                                 std::uint64_t seed);

}  // namespace geoloc
