#include <benchmark/benchmark.h>

#include "qthermo/qthermo.hpp"

using namespace qthermo;

namespace {

Channel random_square_channel(int n, Rng& rng) {
  const MultiMatrixAlgebra a({n});
  return catalog::random_channel(a, a, n, rng);
}

void BM_HermEig(benchmark::State& st) {
  Rng rng(1);
  const CMat a = random_hermitian(rng, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(herm_eig(a));
}
BENCHMARK(BM_HermEig)->RangeMultiplier(2)->Range(4, 64);

void BM_GnsBimodule(benchmark::State& st) {
  Rng rng(2);
  const Channel alpha = random_square_channel(static_cast<int>(st.range(0)), rng);
  const State phi = random_faithful_state(alpha.target, rng);
  for (auto _ : st) benchmark::DoNotOptimize(gns_bimodule(alpha, phi, 3));
}
BENCHMARK(BM_GnsBimodule)->DenseRange(2, 4);

void BM_LandauerVerdict(benchmark::State& st) {
  Rng rng(4);
  const Channel alpha = random_square_channel(static_cast<int>(st.range(0)), rng);
  const State phi = random_faithful_state(alpha.target, rng);
  const ThermoConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(landauer_verdict(alpha, phi, cfg, 5));
}
BENCHMARK(BM_LandauerVerdict)->DenseRange(2, 4);

void BM_BimoduleModular(benchmark::State& st) {
  Rng rng(6);
  const MultiMatrixAlgebra n({2, 1}), m({static_cast<int>(st.range(0)), 1});
  IMat mult(2, 2);
  mult << 1, 2, 2, 1;
  const Bimodule h(n, m, mult);
  const State phi = random_faithful_state(n, rng), psi = random_faithful_state(m, rng);
  for (auto _ : st) benchmark::DoNotOptimize(bimodule_modular(h, phi, psi).it_dense(0.5));
}
BENCHMARK(BM_BimoduleModular)->DenseRange(1, 4);

void BM_RelativeTensor(benchmark::State& st) {
  Rng rng(7);
  const MultiMatrixAlgebra a({static_cast<int>(st.range(0))});
  const Bimodule h(a, a, IMat::Constant(1, 1, 2));
  const State phi = random_faithful_state(a, rng);
  for (auto _ : st) benchmark::DoNotOptimize(relative_tensor(h, h, phi));
}
BENCHMARK(BM_RelativeTensor)->DenseRange(1, 3);

void BM_MinimalExpectation(benchmark::State& st) {
  const Homomorphism theta = catalog::embedding(2, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(minimal_expectation(theta, 8));
}
BENCHMARK(BM_MinimalExpectation)->DenseRange(2, 4);

}  // namespace

BENCHMARK_MAIN();
