#include "geoloc/model.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "geoloc/design_matrix.hpp"
#include "geoloc/error.hpp"

namespace geoloc {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) throw PredictionError("matrix size mismatch");
  return m;
}

json forest_params(const ForestParams& p) {
  return json{{"n_trees", p.n_trees},
              {"features_per_split", p.features_per_split},
              {"min_leaf", p.min_leaf},
              {"seed", p.seed}};
}

json rfe_to_json(const FeatureSubset& subset) {
  json steps = json::array();
  for (const auto& s : subset.steps) {
    steps.push_back({{"features", s.features}, {"accuracy", s.accuracy}, {"dropped", s.dropped}});
  }
  return json{{"features", subset.features}, {"steps", steps}};
}

FeatureSubset rfe_from_json(const json& j) {
  FeatureSubset subset;
  subset.features = j.at("features").get<std::vector<std::string>>();
  for (const auto& s : j.at("steps")) {
    subset.steps.push_back({s.at("features").get<std::vector<std::string>>(),
                            s.at("accuracy").get<double>(), s.at("dropped").get<std::string>()});
  }
  return subset;
}

json payload_of(const RandomForestModel& f) {
  json trees = json::array();
  for (const auto& tree : f.trees) {
    json feature = json::array(), threshold = json::array(), left = json::array(),
         right = json::array(), value = json::array();
    for (const auto& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      value.push_back(node.value);
    }
    trees.push_back({{"feature", feature},
                     {"threshold", threshold},
                     {"left", left},
                     {"right", right},
                     {"value", value}});
  }
  return json{{"n_features", f.n_features}, {"trees", trees}};
}

json payload_of(const SvmModel& m) {
  return json{{"support_vectors", matrix_to_json(m.support_vectors)},
              {"coef", m.coef},
              {"bias", m.bias},
              {"gamma", m.gamma},
              {"C", m.C},
              {"platt_a", m.platt_a},
              {"platt_b", m.platt_b}};
}

json payload_of(const MlpModel& m) {
  return json{{"inputs", m.inputs}, {"hidden", m.hidden}, {"decay", m.decay}, {"w1", m.w1},
              {"b1", m.b1},         {"w2", m.w2},         {"b2", m.b2}};
}

RandomForestModel forest_from(const json& params, const json& payload) {
  RandomForestModel f;
  f.params.n_trees = params.at("n_trees").get<std::size_t>();
  f.params.features_per_split = params.at("features_per_split").get<std::size_t>();
  f.params.min_leaf = params.at("min_leaf").get<std::size_t>();
  f.params.seed = params.at("seed").get<std::uint64_t>();
  f.n_features = payload.at("n_features").get<std::size_t>();
  for (const auto& t : payload.at("trees")) {
    const auto feature = t.at("feature").get<std::vector<int>>();
    const auto threshold = t.at("threshold").get<std::vector<double>>();
    const auto left = t.at("left").get<std::vector<int>>();
    const auto right = t.at("right").get<std::vector<int>>();
    const auto value = t.at("value").get<std::vector<double>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0) {
      throw PredictionError("malformed tree in model file");
    }
    DecisionTree tree;
    for (std::size_t i = 0; i < n; ++i) {
      const TreeNode node{feature[i], threshold[i], left[i], right[i], value[i]};
      if (node.feature >= 0 &&
          (static_cast<std::size_t>(node.feature) >= f.n_features || node.left <= static_cast<int>(i) ||
           node.right <= static_cast<int>(i) || node.left >= static_cast<int>(n) ||
           node.right >= static_cast<int>(n))) {
        throw PredictionError("malformed tree node in model file");
      }
      tree.nodes.push_back(node);
    }
    f.trees.push_back(std::move(tree));
  }
  if (f.trees.size() != f.params.n_trees) throw PredictionError("tree count does not match n_trees");
  return f;
}

SvmModel svm_from(const json& payload) {
  SvmModel m;
  m.support_vectors = matrix_from_json(payload.at("support_vectors"));
  m.coef = payload.at("coef").get<std::vector<double>>();
  m.bias = payload.at("bias").get<double>();
  m.gamma = payload.at("gamma").get<double>();
  m.C = payload.at("C").get<double>();
  m.platt_a = payload.at("platt_a").get<double>();
  m.platt_b = payload.at("platt_b").get<double>();
  if (m.coef.size() != m.support_vectors.rows) throw PredictionError("support vector count mismatch");
  return m;
}

MlpModel mlp_from(const json& payload) {
  MlpModel m;
  m.inputs = payload.at("inputs").get<std::size_t>();
  m.hidden = payload.at("hidden").get<std::size_t>();
  m.decay = payload.at("decay").get<double>();
  m.w1 = payload.at("w1").get<std::vector<double>>();
  m.b1 = payload.at("b1").get<std::vector<double>>();
  m.w2 = payload.at("w2").get<std::vector<double>>();
  m.b2 = payload.at("b2").get<double>();
  if (m.w1.size() != m.inputs * m.hidden || m.b1.size() != m.hidden || m.w2.size() != m.hidden) {
    throw PredictionError("MLP weight shapes do not match");
  }
  return m;
}

std::size_t input_width(const TrainedModel& m) {
  return std::visit(
      [](const auto& model) -> std::size_t {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, RandomForestModel>) {
          return model.n_features;
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          return model.support_vectors.cols;
        } else {
          return model.inputs;
        }
      },
      m.model);
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::random_forest:
      return "rforest";
    case ModelKind::svm:
      return "svm";
    case ModelKind::mlp:
      return "mlp";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  if (text == "rforest" || text == "rf" || text == "random_forest") return ModelKind::random_forest;
  if (text == "svm") return ModelKind::svm;
  if (text == "mlp" || text == "nnet") return ModelKind::mlp;
  return std::nullopt;
}

double TrainedModel::predict_proba(const std::vector<double>& values,
                                   const std::vector<std::string>& names) const {
  std::vector<double> x;
  x.reserve(feature_names.size());
  for (const auto& name : feature_names) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw PredictionError("row is missing feature " + name);
    x.push_back(values.at(static_cast<std::size_t>(it - names.begin())));
  }
  return std::visit([&](const auto& m) { return m.predict_proba(x.data()); }, model);
}

std::vector<double> TrainedModel::predict_proba(const Dataset& data) const {
  const DesignMatrix dm = design_matrix(data, feature_names, false);
  std::vector<double> out(dm.x.rows);
  std::visit(
      [&](const auto& m) {
        for (std::size_t r = 0; r < dm.x.rows; ++r) out[r] = m.predict_proba(dm.x.row(r));
      },
      model);
  return out;
}

TrainedModel train_classifier(const Dataset& train, const ClassifierSpec& spec) {
  TrainedModel out;
  out.kind = spec.kind;
  out.feature_names = train.feature_names;
  if (spec.rfe) {
    out.rfe = rfe_select(train, spec.rfe_params);
    out.feature_names = out.rfe->features;
  }
  const DesignMatrix dm = design_matrix(train, out.feature_names, true);
  switch (spec.kind) {
    case ModelKind::random_forest:
      out.model = train_random_forest(dm.x, dm.y, spec.forest);
      break;
    case ModelKind::svm:
      out.model = train_svm_rbf(dm.x, dm.y, spec.svm);
      break;
    case ModelKind::mlp: {
      std::vector<std::string> groups;
      for (const auto& row : train.rows) groups.push_back(row.story_id);
      out.model = train_mlp(dm.x, dm.y, spec.mlp, groups);
      break;
    }
  }
  return out;
}

std::string serialize_model(const TrainedModel& m) {
  json params;
  json payload = std::visit([](const auto& model) { return payload_of(model); }, m.model);
  switch (m.kind) {
    case ModelKind::random_forest:
      params = forest_params(std::get<RandomForestModel>(m.model).params);
      break;
    case ModelKind::svm: {
      const auto& svm = std::get<SvmModel>(m.model);
      params = json{{"C", svm.C}, {"gamma", svm.gamma}, {"kernel", "rbf"}};
      break;
    }
    case ModelKind::mlp: {
      const auto& mlp = std::get<MlpModel>(m.model);
      params = json{{"hidden", mlp.hidden}, {"decay", mlp.decay}, {"activation", "logistic"}};
      break;
    }
  }
  payload["feature_names"] = m.feature_names;
  if (m.rfe) payload["rfe"] = rfe_to_json(*m.rfe);
  const json envelope{{"model_type", std::string(to_string(m.kind))},
                      {"version", kModelFormatVersion},
                      {"params", params},
                      {"payload", payload}};
  return envelope.dump() + "\n";
}

TrainedModel parse_model(std::string_view text) {
  try {
    const json envelope = json::parse(text);
    const int version = envelope.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw PredictionError("unsupported model format version " + std::to_string(version));
    }
    const auto type = envelope.at("model_type").get<std::string>();
    const auto kind = parse_model_kind(type);
    if (!kind) throw PredictionError("unknown model_type " + type);
    const json& params = envelope.at("params");
    const json& payload = envelope.at("payload");

    TrainedModel m;
    m.kind = *kind;
    m.feature_names = payload.at("feature_names").get<std::vector<std::string>>();
    if (payload.contains("rfe")) m.rfe = rfe_from_json(payload.at("rfe"));
    switch (*kind) {
      case ModelKind::random_forest:
        m.model = forest_from(params, payload);
        break;
      case ModelKind::svm:
        m.model = svm_from(payload);
        break;
      case ModelKind::mlp:
        m.model = mlp_from(payload);
        break;
    }
    if (input_width(m) != m.feature_names.size()) {
      throw PredictionError("model input width does not match its feature list");
    }
    return m;
  } catch (const json::exception& e) {
    throw PredictionError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace geoloc
