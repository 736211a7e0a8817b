#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "geoloc/baselines.hpp"
#include "geoloc/corpus_io.hpp"
#include "geoloc/error.hpp"
#include "geoloc/eval.hpp"
#include "geoloc/features.hpp"
#include "geoloc/lexicon.hpp"
#include "geoloc/preprocess.hpp"
#include "geoloc/report_io.hpp"
#include "geoloc/synthetic.hpp"

namespace geoloc::cli {
namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::vector<T> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    T value{};
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw InputError("bad value '" + item + "' in " + std::string(what));
    }
    out.push_back(value);
  }
  if (out.empty()) throw InputError(std::string(what) + " must not be empty");
  return out;
}

std::string number(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

fs::path output_path(const RunConfig& config, std::string_view default_name) {
  return config.output.empty() ? config.out_dir / default_name : config.output;
}

std::vector<TreatedDocument> load_documents(const RunConfig& config) {
  if (!config.treated.empty()) return load_treated(config.treated);
  if (config.corpus.empty() || config.lexicons.empty()) {
    throw InputError("need --treated, or both --corpus and --lexicons");
  }
  const LexiconBundle bundle = LexiconBundle::load_directory(config.lexicons);
  return treat_corpus(load_corpus(config.corpus), bundle, config.jobs);
}

ClassifierSpec classifier_spec(const RunConfig& config, std::string_view name) {
  const auto kind = parse_model_kind(name);
  if (!kind) throw InputError("unknown model '" + std::string(name) + "' (rforest, svm, mlp)");
  if (*kind == ModelKind::svm && config.kernel != "rbf") {
    throw InputError("unsupported kernel '" + config.kernel + "'; only rbf is available");
  }
  ClassifierSpec spec = config.spec;
  spec.kind = *kind;
  const std::uint64_t seed = config.seed.value_or(1);
  spec.forest.seed = seed;
  spec.mlp.seed = seed;
  spec.rfe_params.seed = seed;
  return spec;
}

void require_seed(const RunConfig& config, std::string_view command) {
  if (!config.seed) throw InputError(std::string(command) + " requires --seed");
}

int cmd_treat(const RunConfig& config, std::ostream& out) {
  if (config.corpus.empty() || config.lexicons.empty()) {
    throw InputError("treat needs --corpus and --lexicons");
  }
  const LexiconBundle bundle = LexiconBundle::load_directory(config.lexicons);
  const auto docs = treat_corpus(load_corpus(config.corpus), bundle, config.jobs);
  const fs::path path = output_path(config, "treated.jsonl");
  write_text(path, serialize_treated(docs));

  std::size_t mentions = 0;
  for (const auto& doc : docs) {
    mentions += doc.mentions.size();
    for (const auto& canonical : doc.canonicals()) {
      const auto count = std::count_if(doc.mentions.begin(), doc.mentions.end(),
                                       [&](const LocationMention& m) { return m.canonical == canonical; });
      out << doc.story_id << '\t' << canonical << "\tmentions=" << count
          << "\tsentences=" << sentence_frequency(doc, canonical) << '\n';
    }
  }
  out << "treated " << docs.size() << " documents, " << mentions << " mentions -> " << path.string()
      << '\n';
  return kOk;
}

nlohmann::json subset_json(const FeatureSubset& subset) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& step : subset.steps) {
    steps.push_back({{"features", step.features}, {"accuracy", step.accuracy}, {"dropped", step.dropped}});
  }
  return {{"features", subset.features}, {"steps", steps}};
}

int cmd_train(const RunConfig& config, std::ostream& out) {
  require_seed(config, "train");
  const auto docs = load_documents(config);
  const PatternCorpora corpora = build_pattern_corpora(docs, config.n_min, config.n_max);
  const Dataset data = assemble_dataset(docs, corpora, config.jobs);

  ClassifierSpec spec = classifier_spec(config, config.model);
  spec.forest.jobs = config.jobs;
  spec.rfe_params.jobs = config.jobs;
  const TrainedModel model = train_classifier(data, spec);

  write_text(config.out_dir / "model.json", serialize_model(model));
  write_text(config.out_dir / "corpora.json", serialize_corpora(corpora));
  write_text(config.out_dir / "features.csv", dataset_csv(data));
  if (model.rfe) write_text(config.out_dir / "feature_subset.json", subset_json(*model.rfe).dump(1));

  out << "trained " << to_string(model.kind) << " on " << data.rows.size() << " rows ("
      << data.positives() << " positive) with " << model.feature_names.size() << " features -> "
      << (config.out_dir / "model.json").string() << '\n';
  return kOk;
}

int cmd_predict(const RunConfig& config, std::ostream& out) {
  if (config.model_file.empty() || config.corpora_file.empty()) {
    throw InputError("predict needs --model-file and --corpora");
  }
  if (config.threshold < 0 || config.threshold > 1) throw InputError("--threshold must lie in [0, 1]");
  const TrainedModel model = parse_model(read_text(config.model_file));
  const PatternCorpora corpora = parse_corpora(read_text(config.corpora_file));
  const auto docs = load_documents(config);
  const Dataset data = assemble_dataset(docs, corpora, config.jobs);
  const auto probabilities = model.predict_proba(data);

  std::string csv = "story_id,location,probability,predicted\n";
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& row = data.rows[i];
    csv += csv_field(row.story_id) + ',' + csv_field(row.location) + ',' + number(probabilities[i]) +
           ',' + (probabilities[i] >= config.threshold ? "1" : "0") + '\n';
  }
  const fs::path path = output_path(config, "predictions.csv");
  write_text(path, csv);
  out << "predicted " << data.rows.size() << " rows -> " << path.string() << '\n';
  return kOk;
}

int cmd_evaluate(const RunConfig& config, std::ostream& out) {
  require_seed(config, "evaluate");
  if (config.threshold < 0 || config.threshold > 1) throw InputError("--threshold must lie in [0, 1]");
  const auto docs = load_documents(config);
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) ids.push_back(doc.story_id);
  const CvPlan plan = make_cv_plan(ids, config.k, config.repeats, *config.seed);

  CvOptions options;
  for (const auto& name : config.models) options.classifiers.push_back(classifier_spec(config, name));
  options.threshold = config.threshold;
  options.n_min = config.n_min;
  options.n_max = config.n_max;
  options.jobs = config.jobs;

  const EvalReport report = run_cv(docs, plan, options);
  write_report_files(report, config.out_dir);

  out << "predictor        mean_acc  article_acc  single_loc_acc  auc\n";
  for (const auto& s : report.summary) {
    std::string name = s.predictor;
    name.resize(std::max<std::size_t>(name.size(), 16), ' ');
    out << name << ' ' << number(s.mean_accuracy) << "  " << number(s.mean_article_accuracy) << "  "
        << number(s.single_location_accuracy) << "  " << number(s.mean_auc) << '\n';
  }
  out << "report -> " << config.out_dir.string() << '\n';
  return kOk;
}

int cmd_baselines(const RunConfig& config, std::ostream& out) {
  const auto docs = load_documents(config);
  std::vector<FeatureRow> rows;
  for (const auto& doc : docs) {
    for (const auto& canonical : doc.canonicals()) {
      FeatureRow row{doc.story_id, canonical, std::nullopt, {}};
      if (const auto it = doc.labels.find(canonical); it != doc.labels.end()) row.label = it->second;
      rows.push_back(std::move(row));
    }
  }
  const Baseline kinds[] = {Baseline::dictionary, Baseline::nearest_verb, Baseline::focus};
  std::vector<std::vector<int>> predictions;
  for (const Baseline kind : kinds) predictions.push_back(baseline_predictions(kind, rows, docs));

  std::string csv = "story_id,location,label";
  for (const Baseline kind : kinds) csv += ',' + std::string(to_string(kind));
  csv += '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += csv_field(rows[i].story_id) + ',' + csv_field(rows[i].location) + ',' +
           (rows[i].label ? std::to_string(*rows[i].label) : std::string());
    for (const auto& p : predictions) csv += ',' + std::to_string(p[i]);
    csv += '\n';
  }
  const fs::path path = output_path(config, "baselines.csv");
  write_text(path, csv);

  const bool labeled = !rows.empty() && std::all_of(rows.begin(), rows.end(),
                                                    [](const FeatureRow& r) { return r.label.has_value(); });
  for (std::size_t b = 0; b < predictions.size(); ++b) {
    out << to_string(kinds[b]);
    if (labeled) out << " accuracy=" << number(row_accuracy(rows, predictions[b]));
    out << '\n';
  }
  out << rows.size() << " rows -> " << path.string() << '\n';
  return kOk;
}

int cmd_export_plots(const RunConfig& config, std::ostream& out) {
  if (config.report_file.empty()) throw InputError("export-plots needs --report");
  const EvalReport report = parse_report(read_text(config.report_file));
  write_plot_files(report, config.out_dir);
  out << "plot tables -> " << config.out_dir.string() << '\n';
  return kOk;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
  SyntheticOptions options;
  options.articles = config.articles;
  options.seed = config.seed.value_or(1);
  options.multi_location_share = config.multi_location_share;
  options.noise = config.noise;
  const SyntheticCorpus synthetic = generate_synthetic(options);
  write_text(config.out_dir / "corpus.jsonl", serialize_corpus(synthetic.docs));
  synthetic.write_lexicons(config.out_dir / "lexicons");
  out << "wrote " << synthetic.docs.size() << " articles -> " << config.out_dir.string() << '\n';
  return kOk;
}

// Value-taking options accepted before the subcommand.
const char* const kGlobalValueOptions[] = {"--config", "--seed", "--jobs", "--out-dir"};

bool is_global_value_option(std::string_view arg) {
  return std::any_of(std::begin(kGlobalValueOptions), std::end(kGlobalValueOptions),
                     [&](const char* name) { return arg == name; });
}

bool is_global_key(std::string_view key) {
  return key == "seed" || key == "jobs" || key == "out-dir";
}

/// Position of the subcommand token in `args`, or args.size().
std::size_t find_subcommand(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (is_global_value_option(args[i])) {
      ++i;
      continue;
    }
    if (!args[i].empty() && args[i][0] != '-') return i;
  }
  return args.size();
}

std::optional<fs::path> config_path(const std::vector<std::string>& args, std::size_t limit) {
  std::optional<fs::path> path;
  for (std::size_t i = 0; i < limit; ++i) {
    if (args[i] == "--config" && i + 1 < limit) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  return path;
}

void add_input_options(CLI::App& sub, RunConfig& config) {
  sub.add_option("--corpus", config.corpus, "Raw corpus (JSON lines)");
  sub.add_option("--lexicons", config.lexicons, "Lexicon directory");
  sub.add_option("--treated", config.treated, "Treated corpus (JSON lines); replaces --corpus");
}

void add_ngram_options(CLI::App& sub, RunConfig& config) {
  sub.add_option("--n-min", config.n_min, "Shortest collocation window");
  sub.add_option("--n-max", config.n_max, "Longest collocation window");
}

struct ListOptions {
  std::string hidden;
  std::string decay;
  std::string models;
};

void add_classifier_options(CLI::App& sub, RunConfig& config, ListOptions& lists) {
  auto& spec = config.spec;
  sub.add_option("--trees", spec.forest.n_trees, "Trees per forest");
  sub.add_option("--mtry", spec.forest.features_per_split, "Features tried per split (0: sqrt p)");
  sub.add_option("--min-leaf", spec.forest.min_leaf, "Minimum rows per leaf");
  sub.add_option("--kernel", config.kernel, "SVM kernel (rbf)");
  sub.add_option("--cost", spec.svm.C, "SVM box constraint C");
  sub.add_option("--gamma", spec.svm.gamma, "RBF width (0: 1/p)");
  sub.add_option("--tol", spec.svm.tol, "SMO stopping tolerance");
  sub.add_option("--max-iter", spec.svm.max_iter, "SMO iteration cap");
  sub.add_option("--hidden", lists.hidden, "Hidden sizes to search, comma separated");
  sub.add_option("--decay", lists.decay, "Weight decays to search, comma separated");
  sub.add_option("--epochs", spec.mlp.epochs, "Gradient steps per network");
  sub.add_option("--learning-rate", spec.mlp.learning_rate, "Gradient step size");
  sub.add_flag("--rfe", spec.rfe, "Select features by recursive elimination first");
  sub.add_option("--rfe-folds", spec.rfe_params.folds, "Inner folds for feature elimination");
  sub.add_option("--rfe-trees", spec.rfe_params.n_trees, "Trees per elimination forest");
}

}  // namespace

void RunConfig::validate() const {
  if (n_min < kMinNgram || n_max > kMaxNgram || n_min > n_max) {
    throw InputError("n range must satisfy 2 <= n-min <= n-max <= 7");
  }
  if (jobs == 0) throw InputError("--jobs must be positive");
}

std::vector<std::pair<std::string, std::string>> parse_config(std::string_view content,
                                                              std::string_view source_name) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string line = trim(content.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(std::string_view(line).substr(0, eq)).empty()) {
      throw InputError(std::string(source_name) + ":" + std::to_string(line_no) +
                       ": expected key=value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    entries.emplace_back(std::move(key), trim(std::string_view(line).substr(eq + 1)));
  }
  return entries;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  ListOptions lists;
  std::string config_file;

  CLI::App app{"Event-location classification for news text", "geoloc"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", config_file, "Flat key=value file; flags override it");
  app.add_option("--seed", config.seed, "Random seed (required by train and evaluate)");
  app.add_option("--jobs", config.jobs, "Worker threads");
  app.add_option("--out-dir", config.out_dir, "Directory for output files");

  auto* treat = app.add_subcommand("treat", "Preprocess a raw corpus");
  add_input_options(*treat, config);
  treat->add_option("--output", config.output, "Treated corpus file");

  auto* train = app.add_subcommand("train", "Fit one classifier on a labeled corpus");
  add_input_options(*train, config);
  add_ngram_options(*train, config);
  add_classifier_options(*train, config, lists);
  train->add_option("--model", config.model, "rforest, svm or mlp");

  auto* predict = app.add_subcommand("predict", "Score location mentions with a trained model");
  add_input_options(*predict, config);
  predict->add_option("--model-file", config.model_file, "Model written by train");
  predict->add_option("--corpora", config.corpora_file, "Pattern corpora written by train");
  predict->add_option("--threshold", config.threshold, "Probability cut-off");
  predict->add_option("--output", config.output, "Predictions CSV");

  auto* evaluate = app.add_subcommand("evaluate", "Repeated grouped cross-validation");
  add_input_options(*evaluate, config);
  add_ngram_options(*evaluate, config);
  add_classifier_options(*evaluate, config, lists);
  evaluate->add_option("--models", lists.models, "Classifiers to compare, comma separated");
  evaluate->add_option("--k", config.k, "Folds per repeat");
  evaluate->add_option("--repeats", config.repeats, "Cross-validation repeats");
  evaluate->add_option("--threshold", config.threshold, "Probability cut-off");

  auto* baselines = app.add_subcommand("baselines", "Dictionary, nearest-verb and focus baselines");
  add_input_options(*baselines, config);
  baselines->add_option("--output", config.output, "Baseline CSV");

  auto* plots = app.add_subcommand("export-plots", "Rewrite plot tables from a report");
  plots->add_option("--report", config.report_file, "report.json written by evaluate");

  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus with lexicons");
  synth->add_option("--articles", config.articles, "Number of articles");
  synth->add_option("--multi-share", config.multi_location_share, "Share of multi-location articles");
  synth->add_option("--noise", config.noise, "Chance of flipped phrasing per mention");

  try {
    std::vector<std::string> args = raw_args;
    const std::size_t sub_pos = find_subcommand(args);
    if (const auto path = config_path(args, sub_pos)) {
      const auto entries = parse_config(read_text(*path), path->string());
      CLI::App* chosen = sub_pos < args.size() ? app.get_subcommand_no_throw(args[sub_pos]) : nullptr;
      std::vector<std::string> globals;
      std::vector<std::string> locals;
      for (const auto& [key, value] : entries) {
        const std::string flag = "--" + key + "=" + value;
        if (is_global_key(key)) {
          globals.push_back(flag);
          continue;
        }
        bool known = false;
        for (const auto* sub : app.get_subcommands({})) {
          if (sub->get_option_no_throw("--" + key) != nullptr) known = true;
        }
        if (!known) throw InputError("unknown config key '" + key + "' in " + path->string());
        if (chosen != nullptr && chosen->get_option_no_throw("--" + key) != nullptr) {
          locals.push_back(flag);
        }
      }
      if (sub_pos < args.size()) {
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, locals.begin(), locals.end());
      }
      args.insert(args.begin(), globals.begin(), globals.end());
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (!lists.hidden.empty()) config.spec.mlp.hidden_grid = parse_numbers<std::size_t>(lists.hidden, "--hidden");
    if (!lists.decay.empty()) config.spec.mlp.decay_grid = parse_numbers<double>(lists.decay, "--decay");
    if (!lists.models.empty()) config.models = split_list(lists.models);
    config.validate();

    if (treat->parsed()) return cmd_treat(config, out);
    if (train->parsed()) return cmd_train(config, out);
    if (predict->parsed()) return cmd_predict(config, out);
    if (evaluate->parsed()) return cmd_evaluate(config, out);
    if (baselines->parsed()) return cmd_baselines(config, out);
    if (plots->parsed()) return cmd_export_plots(config, out);
    if (synth->parsed()) return cmd_synth(config, out);
    return kInputError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const TrainingError& e) {
    err << "training failed: " << e.what() << '\n';
    return kTrainingError;
  } catch (const PredictionError& e) {
    err << "prediction failed: " << e.what() << '\n';
    return kPredictionError;
  } catch (const EvaluationError& e) {
    err << "evaluation failed: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace geoloc::cli
