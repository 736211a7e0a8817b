#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace geoloc::oracle {

TreatedDocument random_document(Rng& rng, std::size_t max_tokens) {
  static const char* const vocabulary[] = {"of", "in", "ACTOR", "ADMIN", "MONTH", "NUMERAL",
                                           "protest", "said", "to", "ACTION-VERB"};
  TreatedDocument doc;
  doc.story_id = "random";
  const std::size_t length = 1 + static_cast<std::size_t>(rng.below(max_tokens));
  std::size_t sentence = 0;
  doc.sentences.emplace_back();
  for (std::size_t t = 0; t < length; ++t) {
    if (!doc.sentences.back().empty() && rng.below(8) == 0) {
      doc.sentences.emplace_back();
      ++sentence;
    }
    auto& tokens = doc.sentences.back();
    if (rng.below(4) == 0) {
      const std::string canonical = rng.below(3) == 0 ? "beta" : "alpha";
      const Level level = rng.below(2) == 0 ? Level::province : Level::subprovince;
      doc.mentions.push_back({canonical, level, sentence, tokens.size(), canonical});
      tokens.push_back(level == Level::province ? canonical : "sub-" + canonical);
    } else {
      tokens.emplace_back(vocabulary[rng.below(std::size(vocabulary))]);
    }
  }
  const bool has_alpha = std::any_of(doc.mentions.begin(), doc.mentions.end(),
                                     [](const LocationMention& m) { return m.canonical == "alpha"; });
  if (!has_alpha) {
    const std::size_t s = static_cast<std::size_t>(rng.below(doc.sentences.size()));
    const std::size_t t = static_cast<std::size_t>(rng.below(doc.sentences[s].size()));
    // Replace whatever sits there; drop a mention that occupied the slot.
    doc.mentions.erase(std::remove_if(doc.mentions.begin(), doc.mentions.end(),
                                      [&](const LocationMention& m) {
                                        return m.sentence_idx == s && m.token_idx == t;
                                      }),
                       doc.mentions.end());
    doc.mentions.push_back({"alpha", Level::province, s, t, "alpha"});
    doc.sentences[s][t] = "alpha";
  }
  return doc;
}

std::vector<std::string> naive_collocations(const TreatedDocument& doc, std::string_view canonical,
                                            int n) {
  const auto width = static_cast<std::size_t>(n);
  std::set<std::pair<std::size_t, std::size_t>> windows;
  for (const auto& mention : doc.mentions) {
    if (mention.canonical != canonical) continue;
    const std::size_t size = doc.sentences[mention.sentence_idx].size();
    for (std::size_t start = 0; start + width <= size; ++start) {
      if (start <= mention.token_idx && mention.token_idx < start + width) {
        windows.insert({mention.sentence_idx, start});
      }
    }
  }
  std::vector<std::string> out;
  for (const auto& [s, start] : windows) {
    std::string text;
    for (std::size_t i = start; i < start + width; ++i) {
      std::string token = doc.sentences[s][i];
      for (const auto& mention : doc.mentions) {
        if (mention.canonical == canonical && mention.sentence_idx == s && mention.token_idx == i) {
          token = mention.level == Level::province ? "LOCATION" : "SUB-LOCATION";
        }
      }
      if (!text.empty()) text += ' ';
      text += token;
    }
    out.push_back(text);
  }
  return out;
}

std::vector<SweepPoint> roc_sweep(const std::vector<std::pair<double, int>>& scores) {
  std::vector<double> thresholds{std::numeric_limits<double>::infinity()};
  for (const auto& s : scores) thresholds.push_back(s.first);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  double positives = 0;
  double negatives = 0;
  for (const auto& s : scores) (s.second == 1 ? positives : negatives) += 1;

  std::vector<SweepPoint> points;
  for (const double threshold : thresholds) {
    double tp = 0;
    double fp = 0;
    for (const auto& s : scores) {
      if (s.first >= threshold) (s.second == 1 ? tp : fp) += 1;
    }
    points.push_back({fp / negatives, tp / positives});
  }
  return points;
}

namespace {

double descend(const DecisionTree& tree, int node, const double* x) {
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.feature < 0) return n.value;
  return descend(tree, x[n.feature] <= n.threshold ? n.left : n.right, x);
}

}  // namespace

double forest_traversal_mean(const RandomForestModel& forest, const double* x) {
  std::vector<double> votes;
  for (const auto& tree : forest.trees) votes.push_back(descend(tree, 0, x));
  double sum = 0;
  for (const double v : votes) sum += v;
  return sum / static_cast<double>(votes.size());
}

double kkt_violation(const Matrix& x, const std::vector<int>& y, const std::vector<double>& alpha,
                     double bias, double C, double gamma) {
  const std::size_t n = x.rows;
  auto kernel = [&](std::size_t i, std::size_t j) {
    double d = 0;
    for (std::size_t c = 0; c < x.cols; ++c) d += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
    return std::exp(-gamma * d);
  };
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = bias;
    for (std::size_t j = 0; j < n; ++j) f += alpha[j] * (y[j] == 1 ? 1.0 : -1.0) * kernel(i, j);
    const double margin = (y[i] == 1 ? 1.0 : -1.0) * f;
    // Relative position of alpha in [0, C] decides which inequality applies.
    const double slack = 1e-12 * std::max(1.0, C);
    double violation = 0;
    if (alpha[i] <= slack) {
      violation = std::max(0.0, 1.0 - margin);
    } else if (alpha[i] >= C - slack) {
      violation = std::max(0.0, margin - 1.0);
    } else {
      violation = std::abs(margin - 1.0);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

double mlp_gradient_error(const MlpModel& model, const Matrix& x, const std::vector<int>& y,
                          double eps) {
  MlpModel grad;
  mlp_loss(model, x, y, &grad);

  double worst = 0;
  auto check = [&](double MlpModel::*scalar, std::vector<double> MlpModel::*vec, std::size_t k,
                   double analytic) {
    MlpModel plus = model;
    MlpModel minus = model;
    if (vec != nullptr) {
      (plus.*vec)[k] += eps;
      (minus.*vec)[k] -= eps;
    } else {
      plus.*scalar += eps;
      minus.*scalar -= eps;
    }
    const double numeric = (mlp_loss(plus, x, y) - mlp_loss(minus, x, y)) / (2 * eps);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / scale);
  };
  for (std::size_t k = 0; k < model.w1.size(); ++k) check(nullptr, &MlpModel::w1, k, grad.w1[k]);
  for (std::size_t k = 0; k < model.b1.size(); ++k) check(nullptr, &MlpModel::b1, k, grad.b1[k]);
  for (std::size_t k = 0; k < model.w2.size(); ++k) check(nullptr, &MlpModel::w2, k, grad.w2[k]);
  check(&MlpModel::b2, nullptr, 0, grad.b2);
  return worst;
}

bool linearly_separable(const Matrix& x, const std::vector<int>& y) {
  std::vector<double> w(x.cols + 1, 0.0);
  for (int epoch = 0; epoch < 10000; ++epoch) {
    bool mistakes = false;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double sign = y[i] == 1 ? 1.0 : -1.0;
      double f = w.back();
      for (std::size_t c = 0; c < x.cols; ++c) f += w[c] * x(i, c);
      if (sign * f <= 0) {
        for (std::size_t c = 0; c < x.cols; ++c) w[c] += sign * x(i, c);
        w.back() += sign;
        mistakes = true;
      }
    }
    if (!mistakes) return true;
  }
  return false;
}

}  // namespace geoloc::oracle
