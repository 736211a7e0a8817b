#include "geoloc/mlp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "geoloc/error.hpp"
#include "geoloc/rng.hpp"

namespace geoloc {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using Map = Eigen::Map<RowMatrix>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

double logistic(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

Matrix take_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(x.row(rows[i]), x.row(rows[i]) + x.cols, out.row(i));
  return out;
}

std::vector<int> take(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(y[r]);
  return out;
}

// Parameters flattened as [w1, b1, w2, b2] for the optimizer.
std::vector<double> flatten(const MlpModel& m) {
  std::vector<double> v(m.w1);
  v.insert(v.end(), m.b1.begin(), m.b1.end());
  v.insert(v.end(), m.w2.begin(), m.w2.end());
  v.push_back(m.b2);
  return v;
}

void unflatten(const std::vector<double>& v, MlpModel& m) {
  auto it = v.begin();
  std::copy_n(it, m.w1.size(), m.w1.begin());
  it += static_cast<std::ptrdiff_t>(m.w1.size());
  std::copy_n(it, m.b1.size(), m.b1.begin());
  it += static_cast<std::ptrdiff_t>(m.b1.size());
  std::copy_n(it, m.w2.size(), m.w2.begin());
  it += static_cast<std::ptrdiff_t>(m.w2.size());
  m.b2 = *it;
}

double accuracy(const MlpModel& m, const Matrix& x, const std::vector<int>& y) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < x.rows; ++r) hits += (m.predict_proba(x.row(r)) >= 0.5 ? 1 : 0) == y[r];
  return x.rows == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(x.rows);
}

}  // namespace

double MlpModel::predict_proba(const double* x) const {
  double z = b2;
  for (std::size_t h = 0; h < hidden; ++h) {
    double a = b1[h];
    const double* w = w1.data() + h * inputs;
    for (std::size_t k = 0; k < inputs; ++k) a += w[k] * x[k];
    z += w2[h] * logistic(a);
  }
  return logistic(z);
}

MlpModel init_mlp(std::size_t inputs, std::size_t hidden, double decay, std::uint64_t seed) {
  MlpModel m;
  m.inputs = inputs;
  m.hidden = hidden;
  m.decay = decay;
  Rng rng(seed);
  m.w1.resize(hidden * inputs);
  for (auto& w : m.w1) w = rng.uniform() - 0.5;
  m.b1.assign(hidden, 0.0);
  m.w2.resize(hidden);
  for (auto& w : m.w2) w = rng.uniform() - 0.5;
  m.b2 = 0;
  return m;
}

double mlp_loss(const MlpModel& m, const Matrix& x, const std::vector<int>& y, MlpModel* grad) {
  const auto n = static_cast<Eigen::Index>(x.rows);
  const auto p = static_cast<Eigen::Index>(m.inputs);
  const auto h = static_cast<Eigen::Index>(m.hidden);
  if (x.cols != m.inputs) throw TrainingError("input width does not match the network");

  const ConstMap X(x.data.data(), n, p);
  const ConstMap W1(m.w1.data(), h, p);
  const ConstVecMap B1(m.b1.data(), h);
  const ConstVecMap W2(m.w2.data(), h);

  RowMatrix A = X * W1.transpose();
  A.rowwise() += B1.transpose();
  const RowMatrix H = A.unaryExpr([](double a) { return logistic(a); });
  Eigen::VectorXd z = H * W2;
  z.array() += m.b2;

  double ce = 0;
  Eigen::VectorXd dz(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = y[static_cast<std::size_t>(i)];
    ce += softplus(z(i)) - t * z(i);
    dz(i) = logistic(z(i)) - t;
  }
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  const double penalty = m.decay * (W1.squaredNorm() + W2.squaredNorm());
  const double loss = ce * inv_n + penalty;

  if (grad) {
    *grad = m;
    dz *= inv_n;
    Map gW1(grad->w1.data(), h, p);
    VecMap gB1(grad->b1.data(), h);
    VecMap gW2(grad->w2.data(), h);
    gW2 = H.transpose() * dz + 2.0 * m.decay * W2;
    grad->b2 = dz.sum();
    const RowMatrix dA = ((dz * W2.transpose()).array() * H.array() * (1.0 - H.array())).matrix();
    gW1 = dA.transpose() * X + 2.0 * m.decay * W1;
    gB1 = dA.colwise().sum().transpose();
  }
  return loss;
}

MlpModel fit_mlp(MlpModel model, const Matrix& x, const std::vector<int>& y, std::size_t epochs,
                 double learning_rate, double momentum) {
  std::vector<double> params = flatten(model);
  std::vector<double> velocity(params.size(), 0.0);
  MlpModel grad;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const double loss = mlp_loss(model, x, y, &grad);
    if (!std::isfinite(loss)) {
      throw TrainingError("MLP loss diverged at epoch " + std::to_string(epoch));
    }
    const std::vector<double> g = flatten(grad);
    for (std::size_t k = 0; k < params.size(); ++k) {
      velocity[k] = momentum * velocity[k] - learning_rate * g[k];
      params[k] += velocity[k];
    }
    unflatten(params, model);
  }
  if (!std::isfinite(mlp_loss(model, x, y))) throw TrainingError("MLP loss diverged");
  return model;
}

MlpModel train_mlp(const Matrix& x, const std::vector<int>& y, const MlpParams& params,
                   const std::vector<std::string>& groups, std::vector<MlpGridPoint>* grid) {
  if (x.rows < 2) throw TrainingError("MLP needs at least two rows");
  if (y.size() != x.rows) throw TrainingError("label count does not match row count");
  if (params.hidden_grid.empty() || params.decay_grid.empty()) throw TrainingError("empty MLP grid");

  // Inner split: hold out a share of rows (or of groups).
  std::vector<std::string> keys = groups;
  if (keys.empty()) {
    for (std::size_t r = 0; r < x.rows; ++r) keys.push_back(std::to_string(r));
  }
  std::vector<std::string> distinct = keys;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Rng rng(derive_seed(params.seed, 0));
  rng.shuffle(distinct);
  const auto held = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(params.validation_fraction * static_cast<double>(distinct.size()))),
      1, std::max<std::size_t>(1, distinct.size() - 1));
  std::vector<std::string> validation_keys(distinct.begin(), distinct.begin() + static_cast<std::ptrdiff_t>(held));
  std::sort(validation_keys.begin(), validation_keys.end());
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> valid_rows;
  for (std::size_t r = 0; r < x.rows; ++r) {
    (std::binary_search(validation_keys.begin(), validation_keys.end(), keys[r]) ? valid_rows : train_rows)
        .push_back(r);
  }

  std::size_t best_hidden = params.hidden_grid.front();
  double best_decay = params.decay_grid.front();
  if (distinct.size() >= 2 && !train_rows.empty() && !valid_rows.empty()) {
    const Matrix xt = take_rows(x, train_rows);
    const Matrix xv = take_rows(x, valid_rows);
    const std::vector<int> yt = take(y, train_rows);
    const std::vector<int> yv = take(y, valid_rows);
    double best_acc = -1;
    double best_loss = 0;
    for (std::size_t hidden : params.hidden_grid) {
      for (double decay : params.decay_grid) {
        const MlpModel fitted = fit_mlp(init_mlp(x.cols, hidden, decay, derive_seed(params.seed, hidden)),
                                        xt, yt, params.epochs, params.learning_rate, params.momentum);
        MlpModel plain = fitted;
        plain.decay = 0;
        const MlpGridPoint point{hidden, decay, accuracy(fitted, xv, yv), mlp_loss(plain, xv, yv)};
        if (grid) grid->push_back(point);
        if (point.validation_accuracy > best_acc ||
            (point.validation_accuracy == best_acc && point.validation_loss < best_loss)) {
          best_acc = point.validation_accuracy;
          best_loss = point.validation_loss;
          best_hidden = hidden;
          best_decay = decay;
        }
      }
    }
  }
  return fit_mlp(init_mlp(x.cols, best_hidden, best_decay, derive_seed(params.seed, best_hidden)), x, y,
                 params.epochs, params.learning_rate, params.momentum);
}

}  // namespace geoloc
