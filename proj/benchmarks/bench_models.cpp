#include <benchmark/benchmark.h>

#include "geoloc/design_matrix.hpp"
#include "geoloc/features.hpp"
#include "geoloc/mlp.hpp"
#include "geoloc/random_forest.hpp"
#include "geoloc/svm.hpp"
#include "geoloc/synthetic.hpp"

namespace {

// Covariates of a 60-article synthetic corpus, roughly the size of one
// cross-validation training split.
const geoloc::DesignMatrix& design() {
  static const auto dm = [] {
    geoloc::SyntheticOptions options;
    options.articles = 60;
    const auto synthetic = geoloc::generate_synthetic(options);
    const auto docs = geoloc::treat_corpus(synthetic.docs, synthetic.bundle());
    const auto data = geoloc::assemble_dataset(docs, geoloc::build_pattern_corpora(docs));
    return geoloc::design_matrix(data, data.feature_names, true);
  }();
  return dm;
}

void BM_TrainForest(benchmark::State& state) {
  const auto& dm = design();
  geoloc::ForestParams params;
  params.n_trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(geoloc::train_random_forest(dm.x, dm.y, params));
}
BENCHMARK(BM_TrainForest)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State& state) {
  const auto& dm = design();
  geoloc::ForestParams params;
  params.n_trees = 1000;
  const auto forest = geoloc::train_random_forest(dm.x, dm.y, params);
  std::size_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(forest.predict_proba(dm.x.row(r++ % dm.x.rows)));
}
BENCHMARK(BM_PredictForest);

void BM_TrainSvm(benchmark::State& state) {
  const auto& dm = design();
  geoloc::SvmParams params;
  params.C = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(geoloc::train_svm_rbf(dm.x, dm.y, params));
}
BENCHMARK(BM_TrainSvm)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MlpLossAndGradient(benchmark::State& state) {
  const auto& dm = design();
  const auto model = geoloc::init_mlp(dm.x.cols, static_cast<std::size_t>(state.range(0)), 0.01, 1);
  geoloc::MlpModel grad;
  for (auto _ : state) benchmark::DoNotOptimize(geoloc::mlp_loss(model, dm.x, dm.y, &grad));
}
BENCHMARK(BM_MlpLossAndGradient)->Arg(3)->Arg(9);

}  // namespace
