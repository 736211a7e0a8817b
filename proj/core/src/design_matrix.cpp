#include "geoloc/design_matrix.hpp"

#include <algorithm>

#include "geoloc/error.hpp"
#include "geoloc/rng.hpp"

namespace geoloc {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw InputError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r));
  }
  return m;
}

DesignMatrix design_matrix(const Dataset& data, const std::vector<std::string>& features,
                           bool require_labels) {
  std::vector<std::size_t> columns;
  columns.reserve(features.size());
  for (const auto& name : features) {
    const auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
    if (it == data.feature_names.end()) throw PredictionError("missing feature " + name);
    columns.push_back(static_cast<std::size_t>(it - data.feature_names.begin()));
  }

  DesignMatrix out;
  out.features = features;
  out.x = Matrix(data.rows.size(), features.size());
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const FeatureRow& row = data.rows[r];
    for (std::size_t c = 0; c < columns.size(); ++c) out.x(r, c) = row.values.at(columns[c]);
    if (require_labels) {
      if (!row.label) {
        throw TrainingError("row " + row.story_id + "/" + row.location + " has no label");
      }
      out.y.push_back(*row.label);
    }
  }
  return out;
}

std::map<std::string, std::size_t> grouped_folds(const std::vector<std::string>& ids, std::size_t k,
                                                 std::uint64_t seed) {
  std::vector<std::string> distinct = ids;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Rng rng(seed);
  rng.shuffle(distinct);
  std::map<std::string, std::size_t> folds;
  for (std::size_t i = 0; i < distinct.size(); ++i) folds[distinct[i]] = i % k;
  return folds;
}

}  // namespace geoloc
