#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geoloc/features.hpp"

namespace geoloc {

struct RfeParams {
  std::size_t folds = 3;
  std::size_t n_trees = 150;
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  bool operator==(const RfeParams&) const = default;
};

struct RfeStep {
  std::vector<std::string> features;
  double accuracy = 0;  // inner cross-validated accuracy of this subset
  std::string dropped;  // feature eliminated after this step; empty at the end

  bool operator==(const RfeStep&) const = default;
};

struct FeatureSubset {
  std::vector<std::string> features;  // the retained subset
  std::vector<RfeStep> steps;         // sizes p, p-1, ..., 1

  bool operator==(const FeatureSubset&) const = default;
};

/// Recursive feature elimination with forest permutation importance. Each
/// candidate subset is scored by cross-validation grouped by story; the most
/// accurate subset wins and ties go to the smaller one.
FeatureSubset rfe_select(const Dataset& data, const RfeParams& params);

}  // namespace geoloc
