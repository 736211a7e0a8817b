#include "geoloc/report_io.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "geoloc/corpus_io.hpp"
#include "geoloc/error.hpp"

namespace geoloc {

using nlohmann::json;

namespace {

// JSON has no infinity; the (0,0) anchor's threshold is written as null.
json threshold_to_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }
double threshold_from_json(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string num(double v) { return detail::format_double(v); }

}  // namespace

std::string serialize_report(const EvalReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"repeat", f.repeat},
                     {"fold", f.fold},
                     {"predictor", f.predictor},
                     {"tp", f.confusion.tp},
                     {"fp", f.confusion.fp},
                     {"tn", f.confusion.tn},
                     {"fn", f.confusion.fn},
                     {"accuracy", f.accuracy},
                     {"article_accuracy", f.article_accuracy},
                     {"test_articles", f.test_articles}});
  }
  json audits = json::array();
  for (const auto& a : r.audits) {
    audits.push_back({{"repeat", a.repeat},
                      {"fold", a.fold},
                      {"corpora_fingerprint", detail::hex64(a.corpora_fingerprint)},
                      {"contributors", a.contributors},
                      {"test_stories", a.test_stories}});
  }
  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back({{"predictor", s.predictor},
                       {"mean_accuracy", s.mean_accuracy},
                       {"mean_article_accuracy", s.mean_article_accuracy},
                       {"pooled_accuracy", s.pooled_accuracy},
                       {"single_location_accuracy", s.single_location_accuracy},
                       {"single_location_rows", s.single_location_rows},
                       {"mean_auc", s.mean_auc}});
  }
  json roc = json::array();
  for (const auto& c : r.roc) {
    json points = json::array();
    for (const auto& p : c.points) points.push_back({p.fpr, p.tpr, threshold_to_json(p.threshold)});
    roc.push_back({{"predictor", c.predictor}, {"repeat", c.repeat}, {"auc", c.auc}, {"points", points}});
  }
  json provinces = json::array();
  for (const auto& p : r.provinces.provinces) {
    provinces.push_back({{"province", p.province}, {"ground_truth", p.ground_truth}, {"predicted", p.predicted}});
  }
  json predictions = json::array();
  for (const auto& p : r.predictions) {
    predictions.push_back({{"repeat", p.repeat},
                           {"fold", p.fold},
                           {"story_id", p.story_id},
                           {"location", p.location},
                           {"label", p.label},
                           {"scores", p.scores}});
  }
  const json j{{"k", r.k},
               {"repeats", r.repeats},
               {"seed", r.seed},
               {"threshold", r.threshold},
               {"predictors", r.predictors},
               {"summary", summary},
               {"folds", folds},
               {"audits", audits},
               {"roc", roc},
               {"province_counts", {{"predictors", r.provinces.predictors}, {"provinces", provinces}}},
               {"predictions", predictions}};
  return j.dump(1) + "\n";
}

EvalReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    EvalReport r;
    r.k = j.at("k").get<std::size_t>();
    r.repeats = j.at("repeats").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.threshold = j.at("threshold").get<double>();
    r.predictors = j.at("predictors").get<std::vector<std::string>>();
    for (const auto& s : j.at("summary")) {
      r.summary.push_back({s.at("predictor").get<std::string>(), s.at("mean_accuracy").get<double>(),
                           s.at("mean_article_accuracy").get<double>(), s.at("pooled_accuracy").get<double>(),
                           s.at("single_location_accuracy").get<double>(),
                           s.at("single_location_rows").get<std::size_t>(), s.at("mean_auc").get<double>()});
    }
    for (const auto& f : j.at("folds")) {
      FoldResult fold;
      fold.repeat = f.at("repeat").get<std::size_t>();
      fold.fold = f.at("fold").get<std::size_t>();
      fold.predictor = f.at("predictor").get<std::string>();
      fold.confusion = {f.at("tp").get<std::size_t>(), f.at("fp").get<std::size_t>(),
                        f.at("tn").get<std::size_t>(), f.at("fn").get<std::size_t>()};
      fold.accuracy = f.at("accuracy").get<double>();
      fold.article_accuracy = f.at("article_accuracy").get<double>();
      fold.test_articles = f.at("test_articles").get<std::size_t>();
      r.folds.push_back(std::move(fold));
    }
    for (const auto& a : j.at("audits")) {
      FoldAudit audit;
      audit.repeat = a.at("repeat").get<std::size_t>();
      audit.fold = a.at("fold").get<std::size_t>();
      audit.corpora_fingerprint = std::stoull(a.at("corpora_fingerprint").get<std::string>(), nullptr, 16);
      audit.contributors = a.at("contributors").get<std::vector<std::string>>();
      audit.test_stories = a.at("test_stories").get<std::vector<std::string>>();
      r.audits.push_back(std::move(audit));
    }
    for (const auto& c : j.at("roc")) {
      RocCurve curve{c.at("predictor").get<std::string>(), c.at("repeat").get<std::size_t>(), {},
                     c.at("auc").get<double>()};
      for (const auto& p : c.at("points")) {
        curve.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), threshold_from_json(p.at(2))});
      }
      r.roc.push_back(std::move(curve));
    }
    const json& pc = j.at("province_counts");
    r.provinces.predictors = pc.at("predictors").get<std::vector<std::string>>();
    for (const auto& p : pc.at("provinces")) {
      r.provinces.provinces.push_back({p.at("province").get<std::string>(), p.at("ground_truth").get<std::size_t>(),
                                       p.at("predicted").get<std::vector<std::size_t>>()});
    }
    for (const auto& p : j.at("predictions")) {
      r.predictions.push_back({p.at("repeat").get<std::size_t>(), p.at("fold").get<std::size_t>(),
                               p.at("story_id").get<std::string>(), p.at("location").get<std::string>(),
                               p.at("label").get<int>(), p.at("scores").get<std::vector<double>>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  } catch (const std::logic_error& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string accuracy_csv(const EvalReport& r) {
  std::string out = "predictor,repeat,fold,test_rows,test_articles,tp,fp,tn,fn,accuracy,article_accuracy\n";
  for (const auto& f : r.folds) {
    const auto& c = f.confusion;
    out += csv_field(f.predictor) + "," + std::to_string(f.repeat) + "," + std::to_string(f.fold) + "," +
           std::to_string(c.total()) + "," + std::to_string(f.test_articles) + "," + std::to_string(c.tp) + "," +
           std::to_string(c.fp) + "," + std::to_string(c.tn) + "," + std::to_string(c.fn) + "," +
           num(f.accuracy) + "," + num(f.article_accuracy) + "\n";
  }
  for (const auto& s : r.summary) {
    out += csv_field(s.predictor) + ",mean,mean,,,,,,," + num(s.mean_accuracy) + "," +
           num(s.mean_article_accuracy) + "\n";
  }
  return out;
}

std::string roc_csv(const EvalReport& r) {
  std::string out = "predictor,repeat,fpr,tpr,threshold\n";
  for (const auto& c : r.roc) {
    for (const auto& p : c.points) {
      out += csv_field(c.predictor) + "," + std::to_string(c.repeat) + "," + num(p.fpr) + "," + num(p.tpr) +
             "," + (std::isinf(p.threshold) ? std::string("inf") : num(p.threshold)) + "\n";
    }
  }
  return out;
}

std::string province_counts_csv(const EvalReport& r) {
  std::string out = "province,ground_truth";
  for (const auto& p : r.provinces.predictors) out += "," + csv_field(p);
  out += '\n';
  for (const auto& p : r.provinces.provinces) {
    out += csv_field(p.province) + "," + std::to_string(p.ground_truth);
    for (std::size_t count : p.predicted) out += "," + std::to_string(count);
    out += '\n';
  }
  return out;
}

void write_plot_files(const EvalReport& report, const std::filesystem::path& dir) {
  detail::write_file(dir / "accuracy.csv", accuracy_csv(report));
  detail::write_file(dir / "roc.csv", roc_csv(report));
  detail::write_file(dir / "province_counts.csv", province_counts_csv(report));
}

void write_report_files(const EvalReport& report, const std::filesystem::path& dir) {
  detail::write_file(dir / "report.json", serialize_report(report));
  write_plot_files(report, dir);
}

}  // namespace geoloc
