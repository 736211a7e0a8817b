#include "geoloc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geoloc/error.hpp"

namespace geoloc {
namespace {

constexpr double kTau = 1e-12;

double sigmoid_predict(double f, double a, double b) {
  const double z = f * a + b;
  return z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

class Smo {
 public:
  Smo(const Matrix& x, const std::vector<int>& y, double gamma, double c)
      : n_(x.rows), y_(y.size()), c_(c), q_(n_ * n_), alpha_(n_, 0.0), grad_(n_, -1.0) {
    for (std::size_t i = 0; i < n_; ++i) y_[i] = y[i] == 1 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const double k = rbf_kernel(x.row(i), x.row(j), x.cols, gamma);
        q_[i * n_ + j] = q_[j * n_ + i] = y_[i] * y_[j] * k;
      }
    }
  }

  void solve(double tol, std::size_t max_iter, SvmTrace* trace) {
    for (;;) {
      std::size_t i = 0;
      std::size_t j = 0;
      const double gap = select(i, j);
      if (gap < tol) {
        gap_ = gap;
        break;
      }
      if (iterations_ >= max_iter) {
        std::ostringstream msg;
        msg << "SMO did not converge in " << max_iter << " iterations (violation " << gap << ")";
        throw TrainingError(msg.str());
      }
      update(i, j);
      ++iterations_;
      if (trace) trace->objective.push_back(dual_objective());
    }
  }

  double bias() const {
    // rho = average of y_i G_i over free multipliers, else the midpoint of
    // the feasible interval; the decision function uses -rho.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -upper;
    double sum = 0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (at_upper(t) || at_lower(t)) {
        const bool bounds_above = at_upper(t) ? y_[t] < 0 : y_[t] > 0;
        if (bounds_above) {
          upper = std::min(upper, yg);
        } else {
          lower = std::max(lower, yg);
        }
      } else {
        sum += yg;
        ++free;
      }
    }
    const double rho = free > 0 ? sum / static_cast<double>(free) : (upper + lower) / 2;
    return -rho;
  }

  double dual_objective() const {
    double f = 0;
    for (std::size_t t = 0; t < n_; ++t) f += alpha_[t] * (grad_[t] - 1.0);
    return -0.5 * f;
  }

  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& y() const { return y_; }
  std::size_t iterations() const { return iterations_; }
  double gap() const { return gap_; }

 private:
  bool at_upper(std::size_t t) const { return alpha_[t] >= c_; }
  bool at_lower(std::size_t t) const { return alpha_[t] <= 0; }
  bool in_up(std::size_t t) const { return y_[t] > 0 ? !at_upper(t) : !at_lower(t); }
  bool in_low(std::size_t t) const { return y_[t] > 0 ? !at_lower(t) : !at_upper(t); }
  double q(std::size_t a, std::size_t b) const { return q_[a * n_ + b]; }

  // Returns m(alpha) - M(alpha); fills the working pair.
  double select(std::size_t& out_i, std::size_t& out_j) const {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n_;
    for (std::size_t t = 0; t < n_; ++t) {
      if (in_up(t) && -y_[t] * grad_[t] >= gmax) {
        if (-y_[t] * grad_[t] > gmax || i == n_) i = t;
        gmax = -y_[t] * grad_[t];
      }
    }
    std::size_t j = n_;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n_; ++t) {
      if (!in_low(t)) continue;
      const double v = -y_[t] * grad_[t];
      gmin = std::min(gmin, v);
      if (i == n_) continue;
      const double b = gmax - v;
      if (b <= 0) continue;
      // y_i y_t Q_it = K_it, so K_ii + K_tt - 2 K_it:
      double a = q(i, i) + q(t, t) - 2.0 * y_[i] * y_[t] * q(i, t);
      if (a <= 0) a = kTau;
      const double score = -(b * b) / a;
      if (score < best) {
        best = score;
        j = t;
      }
    }
    out_i = i;
    out_j = j;
    if (i == n_ || j == n_) return 0.0;
    return gmax - gmin;
  }

  // Two-variable subproblem with clipping, as in libsvm's Solver::Solve.
  void update(std::size_t i, std::size_t j) {
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    if (y_[i] != y_[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = alpha_[i] - alpha_[j];
      alpha_[i] += delta;
      alpha_[j] += delta;
      if (diff > 0) {
        if (alpha_[j] < 0) {
          alpha_[j] = 0;
          alpha_[i] = diff;
        }
      } else if (alpha_[i] < 0) {
        alpha_[i] = 0;
        alpha_[j] = -diff;
      }
      if (diff > 0) {
        if (alpha_[i] > c_) {
          alpha_[i] = c_;
          alpha_[j] = c_ - diff;
        }
      } else if (alpha_[j] > c_) {
        alpha_[j] = c_;
        alpha_[i] = c_ + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = alpha_[i] + alpha_[j];
      alpha_[i] -= delta;
      alpha_[j] += delta;
      if (sum > c_) {
        if (alpha_[i] > c_) {
          alpha_[i] = c_;
          alpha_[j] = sum - c_;
        }
      } else if (alpha_[j] < 0) {
        alpha_[j] = 0;
        alpha_[i] = sum;
      }
      if (sum > c_) {
        if (alpha_[j] > c_) {
          alpha_[j] = c_;
          alpha_[i] = sum - c_;
        }
      } else if (alpha_[i] < 0) {
        alpha_[i] = 0;
        alpha_[j] = sum;
      }
    }
    const double di = alpha_[i] - old_i;
    const double dj = alpha_[j] - old_j;
    for (std::size_t t = 0; t < n_; ++t) grad_[t] += q(t, i) * di + q(t, j) * dj;
  }

  std::size_t n_;
  std::vector<double> y_;
  double c_;
  std::vector<double> q_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  std::size_t iterations_ = 0;
  double gap_ = 0;
};

}  // namespace

double rbf_kernel(const double* a, const double* b, std::size_t dim, double gamma) {
  double d2 = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double SvmModel::decision(const double* x) const {
  double f = bias;
  for (std::size_t s = 0; s < coef.size(); ++s) {
    f += coef[s] * rbf_kernel(support_vectors.row(s), x, support_vectors.cols, gamma);
  }
  return f;
}

double SvmModel::predict_proba(const double* x) const {
  return sigmoid_predict(decision(x), platt_a, platt_b);
}

std::pair<double, double> fit_platt(const std::vector<double>& dec, const std::vector<int>& y) {
  const std::size_t n = dec.size();
  double prior1 = 0;
  for (int label : y) prior1 += label == 1;
  const double prior0 = static_cast<double>(n) - prior1;

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = y[i] == 1 ? hi : lo;

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto objective = [&](double aa, double bb) {
    double f = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * aa + bb;
      f += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1) * z + std::log1p(std::exp(z));
    }
    return f;
  };
  double fval = objective(a, b);

  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0, g1 = 0, g2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * a + b;
      double p, q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = t[i] - p;
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {a, b};
}

SvmModel train_svm_rbf(const Matrix& x, const std::vector<int>& y, const SvmParams& params,
                       SvmTrace* trace) {
  if (y.size() != x.rows) throw TrainingError("label count does not match row count");
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw TrainingError("SVM needs both classes in the training data");
  }
  if (!(params.C > 0)) throw TrainingError("SVM needs C > 0");
  for (double v : x.data) {
    if (!std::isfinite(v)) throw TrainingError("SVM input contains a non-finite value");
  }

  SvmModel model;
  model.C = params.C;
  model.gamma = params.gamma > 0 ? params.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(1, x.cols));

  Smo smo(x, y, model.gamma, params.C);
  smo.solve(params.tol, params.max_iter, trace);
  model.bias = smo.bias();

  std::vector<std::vector<double>> sv;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (smo.alpha()[i] > 0) {
      sv.emplace_back(x.row(i), x.row(i) + x.cols);
      model.coef.push_back(smo.alpha()[i] * smo.y()[i]);
    }
  }
  model.support_vectors = Matrix::from_rows(sv);
  model.support_vectors.cols = x.cols;

  std::vector<double> dec(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) dec[i] = model.decision(x.row(i));
  std::tie(model.platt_a, model.platt_b) = fit_platt(dec, y);

  if (trace) {
    trace->alpha = smo.alpha();
    trace->iterations = smo.iterations();
    trace->gap = smo.gap();
  }
  return model;
}

}  // namespace geoloc
