#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoloc/features.hpp"
#include "geoloc/preprocess.hpp"

namespace geoloc {

enum class Baseline { dictionary, nearest_verb, focus };

/// "dictionary", "nearest_verb", "focus".
std::string_view to_string(Baseline baseline);

/// Every gazetteer hit is a correct event location.
std::vector<int> dictionary_baseline(const std::vector<FeatureRow>& rows);

/// The location whose mention is closest, in tokens counted across sentence
/// boundaries, to any ACTION-VERB tag. Ties and verb-free documents go to the
/// earliest mention. Returns nullopt for documents without mentions.
std::optional<std::string> nearest_verb_baseline(const TreatedDocument& doc);

/// The location mentioned in the most sentences; ties go to the one
/// mentioned first. Returns nullopt for documents without mentions.
std::optional<std::string> focus_baseline(const TreatedDocument& doc);

/// 0/1 per row: 1 when the row's location is the one the baseline picks for
/// its story (every row for the dictionary baseline).
std::vector<int> baseline_predictions(Baseline baseline, const std::vector<FeatureRow>& rows,
                                      const std::vector<TreatedDocument>& docs);

}  // namespace geoloc
