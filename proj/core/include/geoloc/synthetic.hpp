#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geoloc/lexicon.hpp"
#include "geoloc/preprocess.hpp"

namespace geoloc {

struct SyntheticOptions {
  std::size_t articles = 60;
  std::uint64_t seed = 1;
  /// Share of articles reporting events in several places.
  double multi_location_share = 0.3;
  /// Chance that a mention is written with the other class's phrasing.
  double noise = 0.12;
};

/// A labeled English news corpus about an invented country, with lexicons.
/// Event locations tend to appear as "in the city of X", "X province" and
/// next to protest verbs; non-event locations as datelines ("X, Dec 4 (AFP)"),
/// "X officials said" or "a spokesman in X said on Tuesday". Secondary event
/// locations in multi-location articles get weaker, mixed phrasing.
struct SyntheticCorpus {
  std::vector<Document> docs;
  /// File name -> content, in the layout LexiconBundle::load_directory reads.
  std::map<std::string, std::string> lexicon_files;

  LexiconBundle bundle() const;
  void write_lexicons(const std::filesystem::path& dir) const;
};

SyntheticCorpus generate_synthetic(const SyntheticOptions& options);

}  // namespace geoloc
