#include <benchmark/benchmark.h>

#include "mbe/currents.hpp"
#include "mbe/initial_data.hpp"
#include "mbe/solver.hpp"
#include "mbe/spectral.hpp"

namespace {

const mbe::GridSpec& grid() {
  static const mbe::GridSpec g(2, 128, 20.0);
  return g;
}

const mbe::Field& data() {
  static const mbe::Field u = mbe::make_initial_data(mbe::InitialFamily::gaussian_bump, grid(), 0.1, 1);
  return u;
}

void BM_SpectralGradient(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mbe::spectral_gradient(data()));
}
BENCHMARK(BM_SpectralGradient);

void BM_Etd2Step(benchmark::State& state) {
  mbe::SolverConfig c;
  c.step = 0.01;
  const auto m = mbe::CurrentModel::power_law(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(mbe::etd2_step(data(), c.step, m, c));
}
BENCHMARK(BM_Etd2Step);

void BM_PicardStep(benchmark::State& state) {
  mbe::SolverConfig c;
  c.scheme = mbe::Scheme::picard_duhamel;
  c.step = 0.01;
  c.nodes = static_cast<int>(state.range(0));
  const auto m = mbe::CurrentModel::power_law(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(mbe::picard_step(data(), c.step, m, c));
}
BENCHMARK(BM_PicardStep)->Arg(3)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
