#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "geoloc/eval.hpp"

namespace geoloc {

std::string serialize_report(const EvalReport& report);
/// Throws InputError on malformed input.
EvalReport parse_report(std::string_view json);

/// predictor,repeat,fold,test_rows,test_articles,tp,fp,tn,fn,accuracy,article_accuracy
/// followed by one "mean" line per predictor.
std::string accuracy_csv(const EvalReport& report);
/// predictor,repeat,fpr,tpr,threshold
std::string roc_csv(const EvalReport& report);
/// province,ground_truth,<predictor...>
std::string province_counts_csv(const EvalReport& report);

/// report.json, accuracy.csv, roc.csv and province_counts.csv under `dir`.
void write_report_files(const EvalReport& report, const std::filesystem::path& dir);
/// The three CSV summaries only.
void write_plot_files(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace geoloc
