#include "geoloc/corpus_io.hpp"

#include <nlohmann/json.hpp>
#include <set>

#include "file_util.hpp"
#include "geoloc/error.hpp"

namespace geoloc {

using nlohmann::json;

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::map<std::string, int> parse_labels(const json& j, const std::string& at) {
  std::map<std::string, int> labels;
  if (!j.is_object()) throw InputError(at + ": labels must be an object");
  for (const auto& [name, value] : j.items()) {
    if (!value.is_number_integer() || (value.get<int>() != 0 && value.get<int>() != 1)) {
      throw InputError(at + ": label for " + name + " must be 0 or 1");
    }
    labels[normalize_phrase(name)] = value.get<int>();
  }
  return labels;
}

template <typename Fn>
void for_each_json_line(std::string_view content, std::string_view source, Fn&& fn) {
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(content)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError(where(source, line_no) + ": invalid JSON (" + e.what() + ")");
    }
    if (!record.is_object()) throw InputError(where(source, line_no) + ": expected an object");
    try {
      fn(record, where(source, line_no));
    } catch (const json::exception& e) {
      throw InputError(where(source, line_no) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<Document> parse_corpus(std::string_view content, std::string_view source_name) {
  std::vector<Document> docs;
  std::set<std::string> seen;
  for_each_json_line(content, source_name, [&](const json& record, const std::string& at) {
    Document doc;
    if (!record.contains("story_id") || !record.at("story_id").is_string()) {
      throw InputError(at + ": missing string story_id");
    }
    if (!record.contains("text") || !record.at("text").is_string()) {
      throw InputError(at + ": missing string text");
    }
    doc.story_id = record.at("story_id").get<std::string>();
    doc.raw_text = record.at("text").get<std::string>();
    if (record.contains("source") && record.at("source").is_string()) {
      doc.source_tag = record.at("source").get<std::string>();
    }
    if (record.contains("labels")) doc.labels = parse_labels(record.at("labels"), at);
    if (!seen.insert(doc.story_id).second) throw InputError(at + ": repeated story_id " + doc.story_id);
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  return parse_corpus(detail::read_file(path), path.string());
}

std::string serialize_corpus(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    json j{{"story_id", doc.story_id}, {"text", doc.raw_text}};
    if (doc.source_tag) j["source"] = *doc.source_tag;
    if (!doc.labels.empty()) j["labels"] = doc.labels;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string serialize_treated(const std::vector<TreatedDocument>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    json mentions = json::array();
    for (const auto& m : doc.mentions) {
      mentions.push_back({{"canonical", m.canonical},
                          {"level", std::string(to_string(m.level))},
                          {"sentence", m.sentence_idx},
                          {"token", m.token_idx},
                          {"surface", m.surface}});
    }
    json j{{"story_id", doc.story_id}, {"sentences", doc.sentences}, {"mentions", mentions}};
    if (!doc.labels.empty()) j["labels"] = doc.labels;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TreatedDocument> parse_treated(std::string_view content, std::string_view source_name) {
  std::vector<TreatedDocument> docs;
  for_each_json_line(content, source_name, [&](const json& record, const std::string& at) {
    TreatedDocument doc;
    doc.story_id = record.at("story_id").get<std::string>();
    doc.sentences = record.at("sentences").get<std::vector<Sentence>>();
    for (const auto& m : record.at("mentions")) {
      const auto level = parse_level(m.at("level").get<std::string>());
      if (!level) throw InputError(at + ": bad mention level");
      LocationMention mention{m.at("canonical").get<std::string>(), *level,
                              m.at("sentence").get<std::size_t>(), m.at("token").get<std::size_t>(),
                              m.at("surface").get<std::string>()};
      if (mention.sentence_idx >= doc.sentences.size() ||
          mention.token_idx >= doc.sentences[mention.sentence_idx].size()) {
        throw InputError(at + ": mention points outside the text");
      }
      doc.mentions.push_back(std::move(mention));
    }
    if (record.contains("labels")) doc.labels = parse_labels(record.at("labels"), at);
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::vector<TreatedDocument> load_treated(const std::filesystem::path& path) {
  return parse_treated(detail::read_file(path), path.string());
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string dataset_csv(const Dataset& data) {
  std::string out = "story_id,location,Y";
  for (const auto& name : data.feature_names) out += "," + csv_field(name);
  out += '\n';
  for (const auto& row : data.rows) {
    out += csv_field(row.story_id) + "," + csv_field(row.location) + ",";
    if (row.label) out += std::to_string(*row.label);
    for (double v : row.values) out += "," + detail::format_double(v);
    out += '\n';
  }
  return out;
}

std::string serialize_corpora(const PatternCorpora& corpora) {
  json tables = json::object();
  for (int n = corpora.n_min(); n <= corpora.n_max(); ++n) {
    const auto& t = corpora.table(n);
    json correct = json::object();
    json incorrect = json::object();
    for (const auto& [pattern, count] : t.correct) correct[pattern] = count;
    for (const auto& [pattern, count] : t.incorrect) incorrect[pattern] = count;
    tables[std::to_string(n)] = {{"correct", correct}, {"incorrect", incorrect}};
  }
  const json j{{"n_min", corpora.n_min()},
               {"n_max", corpora.n_max()},
               {"contributors", corpora.contributors()},
               {"fingerprint", detail::hex64(corpora.fingerprint())},
               {"ngrams", tables}};
  return j.dump(1) + "\n";
}

PatternCorpora parse_corpora(std::string_view text) {
  try {
    const json j = json::parse(text);
    PatternCorpora corpora(j.at("n_min").get<int>(), j.at("n_max").get<int>());
    for (int n = corpora.n_min(); n <= corpora.n_max(); ++n) {
      const json& t = j.at("ngrams").at(std::to_string(n));
      auto& table = corpora.table(n);
      for (const auto& [pattern, count] : t.at("correct").items()) table.correct[pattern] = count.get<std::size_t>();
      for (const auto& [pattern, count] : t.at("incorrect").items()) table.incorrect[pattern] = count.get<std::size_t>();
    }
    for (const auto& id : j.at("contributors")) corpora.add_contributor(id.get<std::string>());
    corpora.finalize();
    if (j.contains("fingerprint") && j.at("fingerprint").get<std::string>() != detail::hex64(corpora.fingerprint())) {
      throw InputError("pattern corpora fingerprint does not match their content");
    }
    return corpora;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed pattern corpora: ") + e.what());
  }
}

}  // namespace geoloc
