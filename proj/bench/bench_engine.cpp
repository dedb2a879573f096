#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lbl/engine.hpp"

using namespace lbl;

namespace {

LineTable random_lines(std::size_t n, double lo, double hi) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpectralLine> lines(n);
  for (auto& l : lines) {
    l.position = lo + (hi - lo) * u(rng);
    l.intensity_ref = 1e-21 * (0.1 + u(rng));
    l.gamma_foreign_ref = 0.05 + 0.05 * u(rng);
    l.gamma_self_ref = 0.08;
    l.temp_exponent = 0.75;
    l.lower_state_energy = 1000.0 * u(rng);
  }
  return LineTable(std::move(lines));
}

GasConditions conditions() {
  GasConditions c;
  c.temperature = 298.0;
  c.absorber_amount = 1e-3;
  c.broadener.id = BroadenerId::He;
  c.broadener.scale_vs_n2 = 0.52;
  c.broadener.partial_pressure = 200.0;
  return c;
}

const NarrowingMap kMap{{{0.0, 1e6}, NarrowingParams{}, std::nullopt}};

template <auto Fn>
void run(benchmark::State& state) {
  const auto lines = static_cast<std::size_t>(state.range(0));
  const LineTable t = random_lines(lines, 2000.0, 2400.0);
  const SpectralGrid g{2000.0, 2400.0, 400.0 / static_cast<double>(state.range(1) - 1)};
  EngineOptions o;
  o.cutoff = 100.0;
  for (auto _ : state) {
    Spectrum s = Fn(t, conditions(), HalfwidthModel{}, kMap, ProfileHooks{}, g, o);
    benchmark::DoNotOptimize(s.alpha_narrowed.data());
  }
  state.counters["points/s"] = benchmark::Counter(
      static_cast<double>(state.range(1)) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}

void BM_SerialReference(benchmark::State& state) { run<absorption_spectrum_reference>(state); }
void BM_ParallelKernel(benchmark::State& state) { run<absorption_spectrum>(state); }

}  // namespace

BENCHMARK(BM_SerialReference)->Args({1000, 2000})->Args({4000, 4000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelKernel)->Args({1000, 2000})->Args({4000, 4000})->Args({20000, 20000})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
