#include <benchmark/benchmark.h>

#include "geoloc/features.hpp"
#include "geoloc/porter_stemmer.hpp"
#include "geoloc/preprocess.hpp"
#include "geoloc/synthetic.hpp"

namespace {

const geoloc::SyntheticCorpus& corpus() {
  static const auto synthetic = [] {
    geoloc::SyntheticOptions options;
    options.articles = 60;
    return geoloc::generate_synthetic(options);
  }();
  return synthetic;
}

void BM_PorterStem(benchmark::State& state) {
  const std::vector<std::string> words{"protesters", "demonstrations", "generalization", "relational",
                                       "hopefulness", "conditional", "villages", "railway", "sensibility"};
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(geoloc::porter_stem(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_PorterStem);

void BM_TreatDocument(benchmark::State& state) {
  const auto& synthetic = corpus();
  const auto bundle = synthetic.bundle();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geoloc::treat_document(synthetic.docs[i++ % synthetic.docs.size()], bundle));
  }
}
BENCHMARK(BM_TreatDocument);

void BM_CollocationNgrams(benchmark::State& state) {
  const auto& synthetic = corpus();
  const auto docs = geoloc::treat_corpus(synthetic.docs, synthetic.bundle());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (const auto& doc : docs) {
      for (const auto& canonical : doc.canonicals()) {
        benchmark::DoNotOptimize(geoloc::collocation_ngrams(doc, canonical, n));
      }
    }
  }
}
BENCHMARK(BM_CollocationNgrams)->DenseRange(2, 7);

void BM_AssembleDataset(benchmark::State& state) {
  const auto& synthetic = corpus();
  const auto docs = geoloc::treat_corpus(synthetic.docs, synthetic.bundle());
  const auto corpora = geoloc::build_pattern_corpora(docs);
  for (auto _ : state) benchmark::DoNotOptimize(geoloc::assemble_dataset(docs, corpora));
}
BENCHMARK(BM_AssembleDataset)->Unit(benchmark::kMillisecond);

}  // namespace
