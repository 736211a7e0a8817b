#include "geoloc/baselines.hpp"

#include <limits>
#include <map>

#include "geoloc/error.hpp"

namespace geoloc {

std::string_view to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::dictionary:
      return "dictionary";
    case Baseline::nearest_verb:
      return "nearest_verb";
    case Baseline::focus:
      return "focus";
  }
  return "unknown";
}

std::vector<int> dictionary_baseline(const std::vector<FeatureRow>& rows) {
  return std::vector<int>(rows.size(), 1);
}

std::optional<std::string> nearest_verb_baseline(const TreatedDocument& doc) {
  if (doc.mentions.empty()) return std::nullopt;

  std::vector<std::size_t> offset(doc.sentences.size() + 1, 0);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) offset[s + 1] = offset[s] + doc.sentences[s].size();
  const auto action = category_tag(Category::action_verb);
  std::vector<std::size_t> verbs;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (std::size_t t = 0; t < doc.sentences[s].size(); ++t) {
      if (doc.sentences[s][t] == action) verbs.push_back(offset[s] + t);
    }
  }
  // Mentions are recorded in reading order, so the first strict minimum is
  // also the earliest among equals.
  const LocationMention* best = &doc.mentions.front();
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& mention : doc.mentions) {
    const std::size_t pos = offset[mention.sentence_idx] + mention.token_idx;
    std::size_t distance = std::numeric_limits<std::size_t>::max();
    for (std::size_t v : verbs) distance = std::min(distance, v > pos ? v - pos : pos - v);
    if (distance < best_distance) {
      best_distance = distance;
      best = &mention;
    }
  }
  return best->canonical;
}

std::optional<std::string> focus_baseline(const TreatedDocument& doc) {
  if (doc.mentions.empty()) return std::nullopt;
  std::optional<std::string> best;
  std::size_t best_count = 0;
  for (const auto& canonical : doc.canonicals()) {
    const std::size_t count = sentence_frequency(doc, canonical);
    if (!best || count > best_count) {
      best = canonical;
      best_count = count;
    }
  }
  return best;
}

std::vector<int> baseline_predictions(Baseline baseline, const std::vector<FeatureRow>& rows,
                                      const std::vector<TreatedDocument>& docs) {
  if (baseline == Baseline::dictionary) return dictionary_baseline(rows);
  std::map<std::string, std::optional<std::string>, std::less<>> pick;
  for (const auto& doc : docs) {
    pick[doc.story_id] =
        baseline == Baseline::nearest_verb ? nearest_verb_baseline(doc) : focus_baseline(doc);
  }
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const auto it = pick.find(row.story_id);
    if (it == pick.end()) throw PredictionError("no treated document for story " + row.story_id);
    out.push_back(it->second && *it->second == row.location ? 1 : 0);
  }
  return out;
}

}  // namespace geoloc
