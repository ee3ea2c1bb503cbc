#include <benchmark/benchmark.h>

#include <pgw/copula.hpp>
#include <pgw/data.hpp>
#include <pgw/frailty.hpp>
#include <pgw/inference.hpp>
#include <pgw/likelihood.hpp>

using namespace pgw;

namespace {

const PairedData& retinopathy() {
  static const PairedData d = load_paired_csv(PGW_DATA_DIR "/retinopathy.csv", Layout::kLong);
  return d;
}

ModelSpec model7() {
  ModelSpec s;
  s.common_gamma = s.common_tau = true;
  return s;
}

void BM_LogLikelihood(benchmark::State& state) {
  const LogLikelihood ll(model7(), retinopathy(), static_cast<unsigned>(state.range(0)));
  Eigen::VectorXd th(6);
  th << -5.57, 1.52, -0.07, 1.52, 0.14, 0.98;
  for (auto _ : state) benchmark::DoNotOptimize(ll.evaluate(th).value);
}
BENCHMARK(BM_LogLikelihood)->Arg(1)->Arg(4);

void BM_KendallTau(benchmark::State& state) {
  double lambda = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kendall_tau({0.6, lambda}));
    lambda = lambda > 10.0 ? 0.01 : lambda * 1.1;
  }
}
BENCHMARK(BM_KendallTau);

void BM_SpearmanRho(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spearman_rho({0.6, 0.5}));
}
BENCHMARK(BM_SpearmanRho)->Unit(benchmark::kMillisecond);

void BM_TemperedStableSample(benchmark::State& state) {
  const TsParams p{static_cast<double>(state.range(0)) / 10.0, 1.0, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ts_sample(p, 10000, ++seed));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_TemperedStableSample)->Arg(2)->Arg(5)->Arg(8);

void BM_FitModel7(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit(model7(), retinopathy()).loglik);
}
BENCHMARK(BM_FitModel7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
