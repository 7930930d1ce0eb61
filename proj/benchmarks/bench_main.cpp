#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "tempcorr/evolve.hpp"
#include "tempcorr/oracle.hpp"
#include "tempcorr/scenarios.hpp"
#include "tempcorr/seqcorr.hpp"

namespace {

using namespace tempcorr;
using std::numbers::pi;

void BM_LudersUpdate(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::from_bloch(0.2, -0.3, 0.5);
  const Effect e = unsharp_povm(Eigen::Vector3d(0.6, 0.0, 0.8), 0.7).effects()[0];
  for (auto _ : state) benchmark::DoNotOptimize(luders_update(rho, e));
}
BENCHMARK(BM_LudersUpdate);

void BM_Fig2Point(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fig2_point(x));
    x = x < 3.0 ? x + 0.01 : 0.1;
  }
}
BENCHMARK(BM_Fig2Point);

void BM_Fig2Scan(benchmark::State& state) {
  const auto grid = open_grid(static_cast<std::size_t>(state.range(0)), 0.0, pi);
  for (auto _ : state) benchmark::DoNotOptimize(fig2_scan(grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fig2Scan)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_AmplitudeDampingKraus(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::from_bloch(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_channel(rho, amplitude_damping_channel(0.4, pi / 4, 1.0)));
}
BENCHMARK(BM_AmplitudeDampingKraus);

void BM_Rk4Lindblad(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::from_bloch(1, 0, 0);
  const LindbladSpec spec = amplitude_damping_spec(0.4, pi / 4);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rk4_lindblad(rho, spec, 1.0, steps));
}
BENCHMARK(BM_Rk4Lindblad)->Arg(100)->Arg(400)->Arg(1600);

void BM_BruteForceJoint(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Scenario sc = oracle::random_scenario(rng);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_force_joint(sc, 0, 0));
}
BENCHMARK(BM_BruteForceJoint);

void BM_SpinJK4(benchmark::State& state) {
  const SpinJEmbedding emb = spinj_embed(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spinj_k4(emb, pi / 4));
}
BENCHMARK(BM_SpinJK4)->Arg(2)->Arg(8)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
