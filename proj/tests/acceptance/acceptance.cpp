// Acceptance runner: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "geoloc/corpus_io.hpp"
#include "geoloc/error.hpp"
#include "geoloc/eval.hpp"
#include "geoloc/features.hpp"
#include "geoloc/lexicon.hpp"
#include "geoloc/mlp.hpp"
#include "geoloc/preprocess.hpp"
#include "geoloc/random_forest.hpp"
#include "geoloc/report_io.hpp"
#include "geoloc/rng.hpp"
#include "geoloc/svm.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace geoloc;

namespace {

const fs::path kFixtures = GEOLOC_FIXTURE_DIR;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fixed(double value, int digits = 3) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body,
               double extra_seconds = 0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() + extra_seconds;
  const bool in_time = seconds < limit_seconds;
  const bool pass = outcome.ok && in_time;
  if (!pass) ++failures;
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << " [" << fixed(seconds, 2)
            << " s, limit " << fixed(limit_seconds, 0) << " s" << (in_time ? "" : ", too slow") << "]"
            << std::endl;
}

// ---------------------------------------------------------------------------

Outcome preprocessing_fixture() {
  const LexiconBundle bundle = LexiconBundle::load_directory(kFixtures / "china");
  std::vector<std::string> mismatched;
  for (const char* name : {"custody_death", "railway_blockade"}) {
    const auto treated = treat_corpus(load_corpus(kFixtures / (std::string(name) + ".jsonl")), bundle);
    const std::string golden = slurp(kFixtures / "golden" / (std::string(name) + ".treated.jsonl"));
    if (serialize_treated(treated) != golden) mismatched.push_back(name);
  }
  if (mismatched.empty()) return {true, "custody_death and railway_blockade match their golden treated files"};
  std::string detail = "mismatch:";
  for (const auto& m : mismatched) detail += " " + m;
  return {false, detail};
}

Outcome frequency_ratios() {
  const LexiconBundle bundle = LexiconBundle::load_directory(kFixtures / "china");
  const auto treated = treat_corpus(load_corpus(kFixtures / "railway_blockade.jsonl"), bundle);
  const Dataset data = assemble_dataset(treated, build_pattern_corpora(treated));
  std::map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < data.rows.size(); ++i) row[data.rows[i].location] = i;
  if (!row.count("heilongjiang") || !row.count("beijing")) return {false, "expected locations missing"};

  const double freq_h = data.value(row["heilongjiang"], "freq_article");
  const double freq_b = data.value(row["beijing"], "freq_article");
  const double imm_h = data.value(row["heilongjiang"], "immaterial_article");
  const double imm_b = data.value(row["beijing"], "immaterial_article");
  const bool freq_ok = std::abs(freq_h - 1.0) <= 0.005 && std::abs(freq_b - 0.67) <= 0.005;
  const bool imm_ok = std::abs(imm_h - 1.0) <= 0.005 && std::abs(imm_b - 0.0) <= 0.005;
  return {freq_ok && imm_ok, "frequency heilongjiang=" + fixed(freq_h) + " beijing=" + fixed(freq_b) +
                                 " (want 1.000, 0.670); immateriality heilongjiang=" + fixed(imm_h) +
                                 " beijing=" + fixed(imm_b) + " (want 1.000, 0.000)"};
}

Outcome ngram_oracle() {
  Rng rng(20240611);
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const TreatedDocument doc = oracle::random_document(rng, 50);
    for (const auto& canonical : doc.canonicals()) {
      for (int n = kMinNgram; n <= kMaxNgram; ++n) {
        ++checks;
        if (collocation_ngrams(doc, canonical, n) != oracle::naive_collocations(doc, canonical, n)) {
          ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in " + std::to_string(checks) +
                               " (stream, location, n) comparisons"};
}

Outcome mlp_gradients() {
  Rng rng(77);
  const double decays[] = {0.0, 1e-3, 1e-2, 1e-1};
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t inputs = 1 + rng.below(6);
    const std::size_t hidden = 1 + rng.below(9);
    const std::size_t rows = 1 + rng.below(20);
    MlpModel model = init_mlp(inputs, hidden, decays[rng.below(4)], rng.next());
    const double scale = 0.5 + 2.5 * rng.uniform();
    for (auto* params : {&model.w1, &model.b1, &model.w2}) {
      for (double& w : *params) w = scale * (w + 0.3 * rng.normal());
    }
    model.b2 = rng.normal();
    Matrix x(rows, inputs);
    for (double& v : x.data) v = rng.uniform();
    std::vector<int> y(rows);
    for (int& label : y) label = static_cast<int>(rng.below(2));
    worst = std::max(worst, oracle::mlp_gradient_error(model, x, y));
  }
  return {worst < 1e-4, "max relative error " + [&] {
            std::ostringstream s;
            s << std::scientific << std::setprecision(2) << worst;
            return s.str();
          }() + " over 100 instances (limit 1e-4)"};
}

struct SvmInstance {
  Matrix x;
  std::vector<int> y;
};

SvmInstance svm_instance(Rng& rng, bool separable) {
  const std::size_t dims = 2 + rng.below(3);
  const std::size_t rows = 10 + rng.below(31);
  SvmInstance inst{Matrix(rows, dims), std::vector<int>(rows)};
  std::vector<double> w(dims);
  for (double& v : w) v = rng.normal();
  std::size_t r = 0;
  while (r < rows) {
    std::vector<double> point(dims);
    for (double& v : point) v = 2 * rng.uniform() - 1;
    double f = 0;
    for (std::size_t c = 0; c < dims; ++c) f += w[c] * point[c];
    int label = f > 0 ? 1 : 0;
    if (separable) {
      if (std::abs(f) < 0.15) continue;
    } else if (rng.below(5) == 0) {
      label = 1 - label;
    }
    for (std::size_t c = 0; c < dims; ++c) inst.x(r, c) = point[c];
    inst.y[r] = label;
    ++r;
  }
  // Both classes must be present.
  if (std::count(inst.y.begin(), inst.y.end(), 1) == 0) inst.y[0] = 1;
  if (std::count(inst.y.begin(), inst.y.end(), 0) == 0) inst.y[0] = 0;
  return inst;
}

Outcome svm_optimality() {
  Rng rng(4242);
  SvmParams params;
  params.C = 100;
  params.tol = 1e-3;
  double worst = 0;
  std::size_t separable = 0;
  std::size_t perfect = 0;
  std::size_t failed = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const SvmInstance inst = svm_instance(rng, trial % 2 == 0);
    SvmTrace trace;
    SvmModel model;
    try {
      model = train_svm_rbf(inst.x, inst.y, params, &trace);
    } catch (const TrainingError&) {
      ++failed;
      continue;
    }
    worst = std::max(worst, oracle::kkt_violation(inst.x, inst.y, trace.alpha, model.bias, model.C,
                                                  model.gamma));
    if (oracle::linearly_separable(inst.x, inst.y)) {
      ++separable;
      std::size_t correct = 0;
      for (std::size_t i = 0; i < inst.x.rows; ++i) {
        correct += (model.decision(inst.x.row(i)) > 0 ? 1 : 0) == inst.y[i];
      }
      perfect += correct == inst.x.rows;
    }
  }
  const bool ok = failed == 0 && worst <= 1e-3 && perfect == separable;
  return {ok, "max KKT violation " + fixed(worst, 6) + " (tol 1e-3); " + std::to_string(perfect) + "/" +
                  std::to_string(separable) + " separable sets fit exactly; " + std::to_string(failed) +
                  " failed to converge"};
}

Outcome forest_equivalence() {
  Rng rng(99);
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 2 + rng.below(49);
    const std::size_t cols = 1 + rng.below(6);
    Matrix x(rows, cols);
    for (double& v : x.data) v = std::round(rng.uniform() * 8) / 8;
    std::vector<int> y(rows);
    for (int& label : y) label = static_cast<int>(rng.below(2));
    y[0] = 0;
    y[1] = 1;
    ForestParams params;
    params.n_trees = 1 + rng.below(5);
    params.seed = rng.next();
    const RandomForestModel forest = train_random_forest(x, y, params);
    for (std::size_t probe = 0; probe < rows + 20; ++probe) {
      std::vector<double> point(cols);
      if (probe < rows) {
        std::copy(x.row(probe), x.row(probe) + cols, point.begin());
      } else {
        for (double& v : point) v = rng.uniform();
      }
      ++checks;
      mismatches += forest.predict_proba(point.data()) != oracle::forest_traversal_mean(forest, point.data());
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " inexact predictions in " + std::to_string(checks)};
}

// ---------------------------------------------------------------------------
// Synthetic benchmark shared by the end-to-end, subset, hygiene and
// determinism criteria.

struct SyntheticRun {
  fs::path root;
  std::optional<EvalReport> report;
  double seconds = 0;
  std::string error;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

bool run_evaluate(const fs::path& root, const fs::path& out_dir, std::string& error) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_cli({"--seed", "17", "--jobs", std::to_string(worker_count()), "--out-dir",
                                 out_dir.string(), "evaluate", "--corpus", (root / "corpus.jsonl").string(),
                                 "--lexicons", (root / "lexicons").string(), "--k", "3", "--repeats", "3"},
                                out, err);
  if (code != 0) error = "evaluate exited " + std::to_string(code) + ": " + err.str();
  return code == 0;
}

SyntheticRun& synthetic_run() {
  static SyntheticRun run = [] {
    SyntheticRun r;
    r.root = fs::temp_directory_path() / "geoloc_acceptance";
    fs::remove_all(r.root);
    std::ostringstream out;
    std::ostringstream err;
    const auto start = std::chrono::steady_clock::now();
    if (cli::run_cli({"--seed", "17", "--out-dir", r.root.string(), "synth", "--articles", "60"}, out, err) != 0) {
      r.error = "synth failed: " + err.str();
      return r;
    }
    if (!run_evaluate(r.root, r.root / "run_a", r.error)) return r;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.report = parse_report(slurp(r.root / "run_a" / "report.json"));
    return r;
  }();
  return run;
}

Outcome synthetic_benchmark() {
  const auto& run = synthetic_run();
  if (!run.report) return {false, run.error};
  const double dictionary = run.report->summary_for("dictionary").mean_accuracy;
  std::vector<double> accuracies;
  std::string detail;
  bool beats = true;
  for (const char* name : {"rforest", "svm", "mlp"}) {
    const double acc = run.report->summary_for(name).mean_accuracy;
    accuracies.push_back(acc);
    beats = beats && acc - dictionary >= 0.15;
    detail += std::string(name) + "=" + fixed(acc) + " ";
  }
  const double spread = *std::max_element(accuracies.begin(), accuracies.end()) -
                        *std::min_element(accuracies.begin(), accuracies.end());
  detail += "dictionary=" + fixed(dictionary) + "; min gap " +
            fixed(*std::min_element(accuracies.begin(), accuracies.end()) - dictionary) +
            " (need 0.150); spread " + fixed(spread) + " (limit 0.100); " +
            std::to_string(run.report->folds.size() / run.report->predictors.size()) + " fold results";
  return {beats && spread <= 0.10, detail};
}

Outcome single_location_subset() {
  const auto& run = synthetic_run();
  if (!run.report) return {false, run.error};
  bool ok = true;
  std::string detail;
  for (const char* name : {"rforest", "svm", "mlp"}) {
    const auto& s = run.report->summary_for(name);
    ok = ok && s.single_location_rows > 0 && s.single_location_accuracy > s.pooled_accuracy;
    detail += std::string(name) + " " + fixed(s.single_location_accuracy) + " vs " + fixed(s.pooled_accuracy) + "; ";
  }
  detail += "subset rows " + std::to_string(run.report->summary_for("rforest").single_location_rows);
  return {ok, detail};
}

Outcome cv_hygiene() {
  // Plan coverage over many shapes.
  Rng rng(5);
  std::size_t plans = 0;
  std::size_t bad_plans = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    const std::size_t stories = k + rng.below(40);
    const std::size_t repeats = 1 + rng.below(3);
    std::vector<std::string> ids;
    for (std::size_t s = 0; s < stories; ++s) ids.push_back("s" + std::to_string(s));
    const CvPlan plan = make_cv_plan(ids, k, repeats, rng.next());
    ++plans;
    for (std::size_t r = 0; r < repeats; ++r) {
      std::map<std::string, int> seen;
      std::vector<std::size_t> sizes(k, 0);
      for (std::size_t f = 0; f < k; ++f) {
        const auto test = plan.test_stories(r, f);
        sizes[f] = test.size();
        for (const auto& id : test) ++seen[id];
      }
      bool good = seen.size() == stories;
      for (const auto& [id, count] : seen) good = good && count == 1;
      good = good && *std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1;
      if (!good) {
        ++bad_plans;
        break;
      }
    }
  }

  // Corpora audits from the synthetic evaluation.
  const auto& run = synthetic_run();
  if (!run.report) return {false, run.error};
  const LexiconBundle bundle = LexiconBundle::load_directory(run.root / "lexicons");
  const auto docs = treat_corpus(load_corpus(run.root / "corpus.jsonl"), bundle);
  std::size_t leaks = 0;
  std::size_t fingerprint_mismatches = 0;
  for (const auto& audit : run.report->audits) {
    const std::set<std::string> test(audit.test_stories.begin(), audit.test_stories.end());
    for (const auto& id : audit.contributors) leaks += test.count(id);
    std::vector<TreatedDocument> train;
    for (const auto& doc : docs) {
      if (!test.count(doc.story_id)) train.push_back(doc);
    }
    fingerprint_mismatches += build_pattern_corpora(train).fingerprint() != audit.corpora_fingerprint;
  }
  const bool ok = bad_plans == 0 && leaks == 0 && fingerprint_mismatches == 0 && run.report->audits.size() == 9;
  return {ok, std::to_string(bad_plans) + "/" + std::to_string(plans) + " plans with coverage errors; " +
                  std::to_string(leaks) + " test stories among contributors; " +
                  std::to_string(fingerprint_mismatches) + "/" + std::to_string(run.report->audits.size()) +
                  " fold fingerprints differ from training-only rebuilds"};
}

Outcome determinism(double& seconds) {
  const auto& run = synthetic_run();
  if (!run.report) return {false, run.error};
  const auto start = std::chrono::steady_clock::now();
  std::string error;
  if (!run_evaluate(run.root, run.root / "run_b", error)) return {false, error};
  seconds = run.seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::string> differing;
  for (const char* file : {"report.json", "accuracy.csv", "roc.csv", "province_counts.csv"}) {
    if (slurp(run.root / "run_a" / file) != slurp(run.root / "run_b" / file)) differing.push_back(file);
  }
  std::string detail = differing.empty() ? "4 report files byte-identical across two runs" : "differ:";
  for (const auto& f : differing) detail += " " + f;
  return {differing.empty(), detail};
}

Outcome roc_checks() {
  Rng rng(31);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<double, int>> scores(20);
    for (auto& s : scores) s = {std::round(rng.uniform() * 10) / 10, static_cast<int>(rng.below(2))};
    scores[0].second = 1;
    scores[1].second = 0;
    const auto points = roc_points(scores);
    const auto expected = oracle::roc_sweep(scores);
    bool same = points.size() == expected.size();
    for (std::size_t i = 0; same && i < points.size(); ++i) {
      same = std::abs(points[i].fpr - expected[i].fpr) < 1e-12 && std::abs(points[i].tpr - expected[i].tpr) < 1e-12;
    }
    mismatches += !same;
  }

  std::size_t malformed = 0;
  std::size_t curves = 0;
  const auto& run = synthetic_run();
  if (run.report) {
    for (const auto& curve : run.report->roc) {
      ++curves;
      const auto& p = curve.points;
      bool good = !p.empty() && p.front().fpr == 0 && p.front().tpr == 0 && p.back().fpr == 1 && p.back().tpr == 1;
      for (std::size_t i = 1; good && i < p.size(); ++i) good = p[i].fpr >= p[i - 1].fpr && p[i].tpr >= p[i - 1].tpr;
      malformed += !good;
    }
  }
  const bool ok = mismatches == 0 && malformed == 0 && curves > 0;
  return {ok, std::to_string(mismatches) + "/500 random sets differ from the sweep oracle; " +
                  std::to_string(malformed) + "/" + std::to_string(curves) + " pooled curves not monotone or unanchored"};
}

}  // namespace

int main() {
  criterion("preprocessing fixture", 1, preprocessing_fixture);
  criterion("frequency-ratio worked example", 1, frequency_ratios);
  criterion("n-gram oracle", 10, ngram_oracle);
  criterion("MLP gradient check", 30, mlp_gradients);
  criterion("SVM optimality", 60, svm_optimality);
  criterion("forest equivalence", 5, forest_equivalence);
  {
    const auto start = std::chrono::steady_clock::now();
    try {
      synthetic_run();
    } catch (const std::exception&) {
      // Reported by the criteria that need the run.
    }
    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    criterion("end-to-end synthetic benchmark", 300, synthetic_benchmark, setup);
    criterion("single-true-location subset", 300, single_location_subset, setup);
  }
  criterion("CV hygiene", 5, cv_hygiene);
  {
    double seconds = 0;
    const Outcome outcome = determinism(seconds);
    criterion("determinism", 600, [&] { return outcome; }, seconds);
  }
  criterion("ROC", 5, roc_checks);
  return failures == 0 ? 0 : 1;
}
