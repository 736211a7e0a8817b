#include "geoloc/eval.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "geoloc/error.hpp"
#include "geoloc/parallel.hpp"
#include "geoloc/rng.hpp"

namespace geoloc {
namespace {

int classify(double p, double threshold) { return p >= threshold ? 1 : 0; }

ClassifierSpec seeded(ClassifierSpec spec, std::uint64_t fold_key) {
  spec.forest.seed = derive_seed(spec.forest.seed, fold_key);
  spec.forest.jobs = 1;
  spec.mlp.seed = derive_seed(spec.mlp.seed, fold_key);
  spec.rfe_params.seed = derive_seed(spec.rfe_params.seed, fold_key);
  spec.rfe_params.jobs = 1;
  return spec;
}

struct FoldOutput {
  std::vector<FoldResult> results;
  FoldAudit audit;
  std::vector<ScoredRow> scored;
  std::vector<FeatureRow> rows;
  std::vector<std::vector<int>> predicted;  // per predictor
};

}  // namespace

std::vector<std::string> CvPlan::test_stories(std::size_t repeat, std::size_t fold) const {
  std::vector<std::string> out;
  for (const auto& [story, f] : assignments.at(repeat)) {
    if (f == fold) out.push_back(story);
  }
  return out;
}

CvPlan make_cv_plan(const std::vector<std::string>& story_ids, std::size_t k, std::size_t repeats,
                    std::uint64_t seed) {
  if (k < 2) throw InputError("cross-validation needs k >= 2");
  if (repeats < 1) throw InputError("cross-validation needs at least one repeat");
  const std::set<std::string> distinct(story_ids.begin(), story_ids.end());
  if (distinct.size() != story_ids.size()) throw InputError("duplicate story ids in corpus");
  if (story_ids.size() < k) {
    throw InputError("cross-validation needs at least " + std::to_string(k) + " stories, got " +
                     std::to_string(story_ids.size()));
  }
  CvPlan plan;
  plan.k = k;
  plan.repeats = repeats;
  plan.seed = seed;
  for (std::size_t r = 0; r < repeats; ++r) plan.assignments.push_back(grouped_folds(story_ids, k, derive_seed(seed, r)));
  return plan;
}

void Confusion::add(int predicted, int label) {
  if (predicted == 1) {
    ++(label == 1 ? tp : fp);
  } else {
    ++(label == 1 ? fn : tn);
  }
}

double Confusion::accuracy() const {
  return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

std::vector<RocPoint> roc_points(const std::vector<std::pair<double, int>>& scores) {
  double positives = 0;
  for (const auto& [score, label] : scores) positives += label == 1;
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0 || negatives == 0) throw EvaluationError("ROC needs both classes");

  std::vector<std::pair<double, int>> sorted = scores;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<RocPoint> points{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  double tp = 0;
  double fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].first;
    for (; i < sorted.size() && sorted[i].first == threshold; ++i) {
      (sorted[i].second == 1 ? tp : fp) += 1;
    }
    points.push_back({fp / negatives, tp / positives, threshold});
  }
  return points;
}

double auc(const std::vector<RocPoint>& points) {
  double area = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2;
  }
  return area;
}

ProvinceAggregate province_aggregate(const std::vector<FeatureRow>& rows,
                                     const std::vector<std::string>& predictors,
                                     const std::vector<std::vector<int>>& predictions) {
  ProvinceAggregate out;
  out.predictors = predictors;
  std::map<std::string, ProvinceCount> by_province;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& count = by_province[rows[r].location];
    count.province = rows[r].location;
    count.predicted.resize(predictors.size(), 0);
    if (rows[r].label == 1) ++count.ground_truth;
    for (std::size_t p = 0; p < predictors.size(); ++p) {
      if (r < predictions.at(p).size() && predictions[p][r] == 1) ++count.predicted[p];
    }
  }
  for (auto& [name, count] : by_province) out.provinces.push_back(std::move(count));
  return out;
}

double row_accuracy(const std::vector<FeatureRow>& rows, const std::vector<int>& predictions) {
  Confusion c;
  for (std::size_t r = 0; r < rows.size(); ++r) c.add(predictions.at(r), rows[r].label.value_or(0));
  return c.accuracy();
}

double article_accuracy(const std::vector<FeatureRow>& rows, const std::vector<int>& predictions) {
  std::map<std::string, bool> all_right;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto [it, inserted] = all_right.emplace(rows[r].story_id, true);
    if (predictions.at(r) != rows[r].label.value_or(0)) it->second = false;
  }
  if (all_right.empty()) return 0.0;
  const auto right = std::count_if(all_right.begin(), all_right.end(), [](const auto& e) { return e.second; });
  return static_cast<double>(right) / static_cast<double>(all_right.size());
}

namespace {

std::set<std::string> single_location_stories(const std::vector<FeatureRow>& rows) {
  // Distinct locations, so rows pooled over several repeats count once.
  std::map<std::string, std::set<std::string>> positives;
  for (const auto& row : rows) {
    auto& locations = positives[row.story_id];
    if (row.label == 1) locations.insert(row.location);
  }
  std::set<std::string> out;
  for (const auto& [story, locations] : positives) {
    if (locations.size() == 1) out.insert(story);
  }
  return out;
}

}  // namespace

double single_location_subset_accuracy(const std::vector<FeatureRow>& rows,
                                       const std::vector<int>& predictions) {
  const auto stories = single_location_stories(rows);
  Confusion c;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (stories.count(rows[r].story_id)) c.add(predictions.at(r), rows[r].label.value_or(0));
  }
  return c.accuracy();
}

std::size_t single_location_rows(const std::vector<FeatureRow>& rows) {
  const auto stories = single_location_stories(rows);
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const FeatureRow& row) { return stories.count(row.story_id) > 0; }));
}

const PredictorSummary& EvalReport::summary_for(std::string_view predictor) const {
  for (const auto& s : summary) {
    if (s.predictor == predictor) return s;
  }
  throw EvaluationError("no predictor named " + std::string(predictor));
}

EvalReport run_cv(const std::vector<TreatedDocument>& docs, const CvPlan& plan,
                  const CvOptions& options) {
  for (const auto& doc : docs) {
    if (!plan.assignments.empty() && !plan.assignments.front().count(doc.story_id)) {
      throw EvaluationError("story " + doc.story_id + " is not in the cross-validation plan");
    }
    for (const auto& canonical : doc.canonicals()) {
      if (!doc.labels.count(canonical)) {
        throw EvaluationError("story " + doc.story_id + " has no label for " + canonical);
      }
    }
  }

  EvalReport report;
  report.k = plan.k;
  report.repeats = plan.repeats;
  report.seed = plan.seed;
  report.threshold = options.threshold;
  for (const auto& spec : options.classifiers) report.predictors.emplace_back(to_string(spec.kind));
  for (Baseline b : options.baselines) report.predictors.emplace_back(to_string(b));

  const std::size_t tasks = plan.repeats * plan.k;
  std::vector<FoldOutput> outputs(tasks);
  parallel_for(tasks, options.jobs, [&](std::size_t task) {
    const std::size_t repeat = task / plan.k;
    const std::size_t fold = task % plan.k;
    const auto& assignment = plan.assignments.at(repeat);
    std::vector<TreatedDocument> train_docs;
    std::vector<TreatedDocument> test_docs;
    for (const auto& doc : docs) {
      (assignment.at(doc.story_id) == fold ? test_docs : train_docs).push_back(doc);
    }

    FoldOutput& out = outputs[task];
    try {
      const PatternCorpora corpora = build_pattern_corpora(train_docs, options.n_min, options.n_max);
      out.audit = {repeat, fold, corpora.fingerprint(),
                   std::vector<std::string>(corpora.contributors().begin(), corpora.contributors().end()),
                   {}};
      for (const auto& doc : test_docs) out.audit.test_stories.push_back(doc.story_id);
      for (const auto& id : out.audit.test_stories) {
        if (corpora.contributors().count(id)) {
          throw EvaluationError("test story " + id + " contributed training patterns");
        }
      }

      const Dataset train = assemble_dataset(train_docs, corpora);
      const Dataset test = assemble_dataset(test_docs, corpora);
      out.rows = test.rows;

      std::vector<std::vector<double>> scores;
      for (const auto& spec : options.classifiers) {
        const TrainedModel model = train_classifier(train, seeded(spec, task + 1));
        scores.push_back(model.predict_proba(test));
      }
      for (Baseline b : options.baselines) {
        const auto predicted = baseline_predictions(b, test.rows, test_docs);
        scores.emplace_back(predicted.begin(), predicted.end());
      }

      for (std::size_t p = 0; p < scores.size(); ++p) {
        std::vector<int> predicted;
        FoldResult result{repeat, fold, report.predictors[p], {}, 0, 0, test_docs.size()};
        for (std::size_t r = 0; r < test.rows.size(); ++r) {
          predicted.push_back(classify(scores[p][r], options.threshold));
          result.confusion.add(predicted.back(), test.rows[r].label.value_or(0));
        }
        result.accuracy = result.confusion.accuracy();
        result.article_accuracy = article_accuracy(test.rows, predicted);
        out.results.push_back(std::move(result));
        out.predicted.push_back(std::move(predicted));
      }
      for (std::size_t r = 0; r < test.rows.size(); ++r) {
        ScoredRow row{repeat, fold, test.rows[r].story_id, test.rows[r].location,
                      test.rows[r].label.value_or(0), {}};
        for (const auto& s : scores) row.scores.push_back(s[r]);
        out.scored.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      throw EvaluationError("repeat " + std::to_string(repeat) + " fold " + std::to_string(fold) +
                            ": " + e.what());
    }
  });

  const std::size_t np = report.predictors.size();
  std::vector<std::vector<FeatureRow>> pooled_rows(plan.repeats);
  std::vector<std::vector<std::vector<int>>> pooled_pred(plan.repeats, std::vector<std::vector<int>>(np));
  for (std::size_t task = 0; task < tasks; ++task) {
    FoldOutput& out = outputs[task];
    const std::size_t repeat = task / plan.k;
    for (auto& r : out.results) report.folds.push_back(std::move(r));
    report.audits.push_back(std::move(out.audit));
    for (auto& row : out.scored) report.predictions.push_back(std::move(row));
    pooled_rows[repeat].insert(pooled_rows[repeat].end(), out.rows.begin(), out.rows.end());
    for (std::size_t p = 0; p < np; ++p) {
      pooled_pred[repeat][p].insert(pooled_pred[repeat][p].end(), out.predicted[p].begin(),
                                    out.predicted[p].end());
    }
  }

  for (std::size_t p = 0; p < np; ++p) {
    PredictorSummary s;
    s.predictor = report.predictors[p];
    std::size_t count = 0;
    for (const auto& f : report.folds) {
      if (f.predictor != s.predictor) continue;
      s.mean_accuracy += f.accuracy;
      s.mean_article_accuracy += f.article_accuracy;
      ++count;
    }
    if (count > 0) {
      s.mean_accuracy /= static_cast<double>(count);
      s.mean_article_accuracy /= static_cast<double>(count);
    }

    std::vector<FeatureRow> all_rows;
    std::vector<int> all_pred;
    for (std::size_t r = 0; r < plan.repeats; ++r) {
      all_rows.insert(all_rows.end(), pooled_rows[r].begin(), pooled_rows[r].end());
      all_pred.insert(all_pred.end(), pooled_pred[r][p].begin(), pooled_pred[r][p].end());
    }
    s.pooled_accuracy = row_accuracy(all_rows, all_pred);
    s.single_location_accuracy = single_location_subset_accuracy(all_rows, all_pred);
    s.single_location_rows = single_location_rows(all_rows);

    std::size_t curves = 0;
    for (std::size_t r = 0; r < plan.repeats; ++r) {
      std::vector<std::pair<double, int>> scores;
      for (const auto& row : report.predictions) {
        if (row.repeat == r) scores.emplace_back(row.scores[p], row.label);
      }
      const bool both = std::any_of(scores.begin(), scores.end(), [](const auto& s) { return s.second == 1; }) &&
                        std::any_of(scores.begin(), scores.end(), [](const auto& s) { return s.second == 0; });
      if (!both) continue;
      RocCurve curve{s.predictor, r, roc_points(scores), 0};
      curve.auc = auc(curve.points);
      s.mean_auc += curve.auc;
      ++curves;
      report.roc.push_back(std::move(curve));
    }
    if (curves > 0) s.mean_auc /= static_cast<double>(curves);
    report.summary.push_back(std::move(s));
  }

  if (plan.repeats > 0) report.provinces = province_aggregate(pooled_rows[0], report.predictors, pooled_pred[0]);
  return report;
}

EvalReport run_cv(const std::vector<Document>& corpus, const LexiconBundle& lexicons,
                  const CvPlan& plan, const CvOptions& options) {
  return run_cv(treat_corpus(corpus, lexicons, options.jobs), plan, options);
}

}  // namespace geoloc
