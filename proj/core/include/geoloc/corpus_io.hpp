#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "geoloc/features.hpp"
#include "geoloc/preprocess.hpp"

namespace geoloc {

/// JSON lines: {"story_id": ..., "text": ..., "labels": {province: 0|1}}.
/// "source" is optional; blank lines are skipped. Throws InputError with the
/// line number on malformed records or repeated story ids.
std::vector<Document> parse_corpus(std::string_view content, std::string_view source_name = "<memory>");
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::string serialize_corpus(const std::vector<Document>& docs);

/// Treated documents as JSON lines (sentences, mentions, labels).
std::string serialize_treated(const std::vector<TreatedDocument>& docs);
std::vector<TreatedDocument> parse_treated(std::string_view content,
                                           std::string_view source_name = "<memory>");
std::vector<TreatedDocument> load_treated(const std::filesystem::path& path);

/// Header story_id,location,Y,<features...>; Y is empty for unlabeled rows.
std::string dataset_csv(const Dataset& data);

/// Pattern corpora as JSON keyed by n.
std::string serialize_corpora(const PatternCorpora& corpora);
PatternCorpora parse_corpora(std::string_view json);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace geoloc
