#include "geoloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "file_util.hpp"
#include "geoloc/error.hpp"
#include "geoloc/parallel.hpp"

namespace geoloc {
namespace {

void check_n(int n) {
  if (n < kMinNgram || n > kMaxNgram) {
    throw InputError("n-gram length " + std::to_string(n) + " outside [2, 7]");
  }
}

std::size_t count_tags(const Sentence& sentence, std::string_view tag) {
  return static_cast<std::size_t>(std::count(sentence.begin(), sentence.end(), tag));
}

std::vector<std::size_t> sentences_mentioning(const TreatedDocument& doc,
                                              std::string_view canonical) {
  std::vector<std::size_t> sentences;
  for (const auto& mention : doc.mentions) {
    if (mention.canonical == canonical) sentences.push_back(mention.sentence_idx);
  }
  std::sort(sentences.begin(), sentences.end());
  sentences.erase(std::unique(sentences.begin(), sentences.end()), sentences.end());
  return sentences;
}

}  // namespace

std::set<std::string, std::less<>> top_half(const PatternCounts& counts) {
  std::vector<const PatternCounts::value_type*> ranked;
  ranked.reserve(counts.size());
  for (const auto& entry : counts) ranked.push_back(&entry);
  // Map order already breaks ties lexicographically; a stable sort keeps it.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto* a, const auto* b) { return a->second > b->second; });
  const std::size_t keep = (counts.size() + 1) / 2;
  std::set<std::string, std::less<>> top;
  for (std::size_t i = 0; i < keep; ++i) top.insert(ranked[i]->first);
  return top;
}

PatternCorpora::PatternCorpora(int n_min, int n_max) : n_min_(n_min), n_max_(n_max) {
  check_n(n_min);
  check_n(n_max);
  if (n_min > n_max) throw InputError("empty n-gram range");
}

const NgramTable& PatternCorpora::table(int n) const {
  if (n < n_min_ || n > n_max_) throw InputError("n-gram length " + std::to_string(n) + " not built");
  return tables_[static_cast<std::size_t>(n)];
}

NgramTable& PatternCorpora::table(int n) {
  return const_cast<NgramTable&>(std::as_const(*this).table(n));
}

void PatternCorpora::add(int n, const std::vector<std::string>& patterns, bool correct) {
  auto& counts = correct ? table(n).correct : table(n).incorrect;
  for (const auto& pattern : patterns) ++counts[pattern];
}

void PatternCorpora::finalize() {
  for (int n = n_min_; n <= n_max_; ++n) {
    auto& t = table(n);
    t.top_correct = top_half(t.correct);
    t.top_incorrect = top_half(t.incorrect);
  }
}

std::uint64_t PatternCorpora::fingerprint() const {
  detail::Fnv1a hash;
  hash.update(static_cast<std::uint64_t>(n_min_));
  hash.update(static_cast<std::uint64_t>(n_max_));
  for (int n = n_min_; n <= n_max_; ++n) {
    for (const auto* counts : {&table(n).correct, &table(n).incorrect}) {
      hash.update(static_cast<std::uint64_t>(counts->size()));
      for (const auto& [pattern, count] : *counts) {
        hash.update(pattern);
        hash.update(static_cast<std::uint64_t>(count));
      }
    }
  }
  hash.update(static_cast<std::uint64_t>(contributors_.size()));
  for (const auto& id : contributors_) {
    hash.update(id);
    hash.update(std::string_view("\n"));
  }
  return hash.digest();
}

std::vector<std::string> collocation_ngrams(const TreatedDocument& doc, std::string_view canonical,
                                            int n) {
  check_n(n);
  if (!doc.mentions_canonical(canonical)) {
    throw InputError("story " + doc.story_id + " never mentions " + std::string(canonical));
  }
  const auto width = static_cast<std::size_t>(n);
  std::vector<std::string> patterns;
  std::vector<std::string_view> placeholder;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence& sentence = doc.sentences[s];
    if (sentence.size() < width) continue;

    placeholder.assign(sentence.size(), std::string_view());
    bool any = false;
    for (const auto& mention : doc.mentions) {
      if (mention.sentence_idx != s || mention.canonical != canonical) continue;
      placeholder[mention.token_idx] =
          mention.level == Level::province ? kLocationPlaceholder : kSubLocationPlaceholder;
      any = true;
    }
    if (!any) continue;

    for (std::size_t start = 0; start + width <= sentence.size(); ++start) {
      const auto first = placeholder.begin() + static_cast<std::ptrdiff_t>(start);
      if (std::all_of(first, first + n, [](std::string_view p) { return p.empty(); })) continue;
      std::string pattern;
      for (std::size_t i = start; i < start + width; ++i) {
        if (i > start) pattern += ' ';
        pattern += placeholder[i].empty() ? std::string_view(sentence[i]) : placeholder[i];
      }
      patterns.push_back(std::move(pattern));
    }
  }
  return patterns;
}

PatternCorpora build_pattern_corpora(const std::vector<TreatedDocument>& docs, int n_min,
                                     int n_max) {
  PatternCorpora corpora(n_min, n_max);
  for (const auto& doc : docs) {
    for (const auto& canonical : doc.canonicals()) {
      const auto label = doc.labels.find(canonical);
      if (label == doc.labels.end()) {
        throw InputError("story " + doc.story_id + " has no label for " + canonical);
      }
      for (int n = n_min; n <= n_max; ++n) {
        corpora.add(n, collocation_ngrams(doc, canonical, n), label->second == 1);
      }
      corpora.add_contributor(doc.story_id);
    }
  }
  corpora.finalize();
  return corpora;
}

double ngram_ratio(const std::vector<std::string>& patterns, const PatternCorpora& corpora, int n) {
  const auto& t = corpora.table(n);
  double correct = 0;
  double incorrect = 0;
  for (const auto& pattern : patterns) {
    if (auto it = t.correct.find(pattern); it != t.correct.end()) correct += static_cast<double>(it->second);
    if (auto it = t.incorrect.find(pattern); it != t.incorrect.end()) incorrect += static_cast<double>(it->second);
  }
  if (correct + incorrect == 0) return 0.5;
  return correct / (correct + incorrect);
}

TopMatches top_pattern_matches(const std::vector<std::string>& patterns,
                               const PatternCorpora& corpora, int n) {
  const auto& t = corpora.table(n);
  TopMatches hits;
  for (const auto& pattern : patterns) {
    hits.correct += t.top_correct.count(pattern);
    hits.incorrect += t.top_incorrect.count(pattern);
  }
  return hits;
}

std::size_t sentence_frequency(const TreatedDocument& doc, std::string_view canonical) {
  return sentences_mentioning(doc, canonical).size();
}

Materiality materiality(const TreatedDocument& doc, std::string_view canonical) {
  const auto action = category_tag(Category::action_verb);
  const auto nontopic = category_tag(Category::nontopic);
  const auto source = category_tag(Category::source);
  Materiality m;
  for (std::size_t s : sentences_mentioning(doc, canonical)) {
    const Sentence& sentence = doc.sentences[s];
    m.material += count_tags(sentence, action);
    m.immaterial += count_tags(sentence, nontopic) + count_tags(sentence, source);
  }
  return m;
}

RawFeatures raw_features(const TreatedDocument& doc, std::string_view canonical,
                         const PatternCorpora& corpora) {
  RawFeatures raw;
  for (int n = corpora.n_min(); n <= corpora.n_max(); ++n) {
    const auto patterns = collocation_ngrams(doc, canonical, n);
    const auto hits = top_pattern_matches(patterns, corpora, n);
    raw.ratio.push_back(ngram_ratio(patterns, corpora, n));
    raw.top_correct.push_back(static_cast<double>(hits.correct));
    raw.top_incorrect.push_back(static_cast<double>(hits.incorrect));
  }
  raw.frequency = static_cast<double>(sentence_frequency(doc, canonical));
  const auto m = materiality(doc, canonical);
  raw.material = static_cast<double>(m.material);
  raw.immaterial = static_cast<double>(m.immaterial);
  return raw;
}

std::vector<std::string> feature_names(int n_min, int n_max) {
  std::vector<std::string> names;
  for (int n = n_min; n <= n_max; ++n) {
    const std::string prefix = "ngram" + std::to_string(n) + "_";
    for (const char* base : {"ratio", "top_correct", "top_incorrect"}) {
      names.push_back(prefix + base + "_article");
      names.push_back(prefix + base + "_data");
    }
  }
  for (const char* base : {"freq", "material", "immaterial"}) {
    names.push_back(std::string(base) + "_article");
    names.push_back(std::string(base) + "_data");
  }
  return names;
}

std::size_t Dataset::column(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) throw PredictionError("dataset has no feature " + std::string(name));
  return static_cast<std::size_t>(it - feature_names.begin());
}

double Dataset::value(std::size_t row, std::string_view name) const {
  return rows.at(row).values.at(column(name));
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const FeatureRow& r) { return r.label == 1; }));
}

void normalize(std::vector<FeatureRow>& rows, std::size_t column, Scope scope) {
  auto apply = [&](std::size_t first, std::size_t last) {
    double max = 0;
    for (std::size_t i = first; i < last; ++i) max = std::max(max, rows[i].values.at(column));
    for (std::size_t i = first; i < last; ++i) {
      double& v = rows[i].values[column];
      v = max > 0 ? v / max : 0.0;
    }
  };
  if (scope == Scope::data) {
    apply(0, rows.size());
    return;
  }
  // Rows of one article need not be contiguous, so group by story id.
  std::unordered_map<std::string, double> max_by_story;
  for (const auto& row : rows) {
    double& max = max_by_story[row.story_id];
    max = std::max(max, row.values.at(column));
  }
  for (auto& row : rows) {
    const double max = max_by_story[row.story_id];
    double& v = row.values[column];
    v = max > 0 ? v / max : 0.0;
  }
}

Dataset assemble_dataset(const std::vector<TreatedDocument>& docs, const PatternCorpora& corpora,
                         unsigned jobs) {
  for (const auto& doc : docs) {
    for (const auto& [location, label] : doc.labels) {
      if (!doc.mentions_canonical(location)) {
        throw InputError("story " + doc.story_id + " labels " + location +
                         ", which it never mentions");
      }
      if (label != 0 && label != 1) {
        throw InputError("story " + doc.story_id + " has label " + std::to_string(label) +
                         " for " + location);
      }
    }
  }

  struct Pending {
    std::size_t doc;
    std::string canonical;
  };
  std::vector<Pending> pending;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& canonical : docs[d].canonicals()) pending.push_back({d, std::move(canonical)});
  }

  const std::size_t ns = static_cast<std::size_t>(corpora.n_max() - corpora.n_min() + 1);
  const std::size_t raw_width = 3 * ns + 3;

  Dataset data;
  data.feature_names = feature_names(corpora.n_min(), corpora.n_max());
  data.provenance = corpora.fingerprint();
  data.rows.resize(pending.size());

  // Raw covariates go into both the _article and _data slot; the two copies
  // are then normalized over different groups.
  parallel_for(pending.size(), jobs, [&](std::size_t i) {
    const TreatedDocument& doc = docs[pending[i].doc];
    const RawFeatures raw = raw_features(doc, pending[i].canonical, corpora);
    FeatureRow& row = data.rows[i];
    row.story_id = doc.story_id;
    row.location = pending[i].canonical;
    if (auto it = doc.labels.find(row.location); it != doc.labels.end()) row.label = it->second;
    row.values.reserve(2 * raw_width);
    auto put = [&](double v) {
      row.values.push_back(v);
      row.values.push_back(v);
    };
    for (std::size_t k = 0; k < ns; ++k) {
      put(raw.ratio[k]);
      put(raw.top_correct[k]);
      put(raw.top_incorrect[k]);
    }
    put(raw.frequency);
    put(raw.material);
    put(raw.immaterial);
  });

  for (std::size_t c = 0; c < 2 * raw_width; ++c) {
    normalize(data.rows, c, c % 2 == 0 ? Scope::article : Scope::data);
  }
  return data;
}

}  // namespace geoloc
