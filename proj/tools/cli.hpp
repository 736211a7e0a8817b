#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geoloc/model.hpp"

namespace geoloc::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kTrainingError = 3,
  kPredictionError = 4,
  kEvaluationError = 5,
};

/// Everything one invocation needs. Unused fields keep their defaults.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path treated;
  std::filesystem::path lexicons;
  std::filesystem::path out_dir = ".";
  std::filesystem::path output;       // overrides the default output file
  std::filesystem::path model_file;   // predict
  std::filesystem::path corpora_file; // predict
  std::filesystem::path report_file;  // export-plots

  int n_min = kMinNgram;
  int n_max = kMaxNgram;

  std::string model = "rforest";
  std::vector<std::string> models{"rforest", "svm", "mlp"};
  std::string kernel = "rbf";
  ClassifierSpec spec;

  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::size_t k = 3;
  std::size_t repeats = 3;
  double threshold = 0.5;

  std::size_t articles = 60;
  double multi_location_share = 0.3;
  double noise = 0.12;

  /// Throws InputError when the n range leaves [2, 7] or is reversed.
  void validate() const;
};

/// Flat `key=value` lines; blank lines and '#' comments are skipped.
std::vector<std::pair<std::string, std::string>> parse_config(std::string_view content,
                                                              std::string_view source_name);

/// Runs one command line (without the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geoloc::cli
