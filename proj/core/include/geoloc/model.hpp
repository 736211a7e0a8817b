#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geoloc/features.hpp"
#include "geoloc/mlp.hpp"
#include "geoloc/random_forest.hpp"
#include "geoloc/rfe.hpp"
#include "geoloc/svm.hpp"

namespace geoloc {

enum class ModelKind { random_forest, svm, mlp };

/// "rforest", "svm", "mlp".
std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view text);

struct ClassifierSpec {
  ModelKind kind = ModelKind::random_forest;
  ForestParams forest;
  SvmParams svm;
  MlpParams mlp;
  /// Run feature elimination before fitting.
  bool rfe = false;
  RfeParams rfe_params;
};

inline constexpr int kModelFormatVersion = 1;

struct TrainedModel {
  ModelKind kind = ModelKind::random_forest;
  std::vector<std::string> feature_names;
  std::variant<RandomForestModel, SvmModel, MlpModel> model;
  std::optional<FeatureSubset> rfe;

  /// Probability that the row's location is a correct event location.
  /// `names` are the columns of `values`; throws PredictionError naming the
  /// first feature the model needs but the row lacks.
  double predict_proba(const std::vector<double>& values,
                       const std::vector<std::string>& names) const;
  std::vector<double> predict_proba(const Dataset& data) const;
};

/// Trains on every labeled row of `train`. Throws TrainingError.
TrainedModel train_classifier(const Dataset& train, const ClassifierSpec& spec);

/// Versioned JSON envelope {model_type, version, params, payload}.
std::string serialize_model(const TrainedModel& model);
/// Throws PredictionError on malformed or unsupported input.
TrainedModel parse_model(std::string_view json);

}  // namespace geoloc
