#include <benchmark/benchmark.h>

#include "rawsynth/dark_bank.hpp"
#include "rawsynth/shot_noise.hpp"

using namespace rawsynth;

namespace {

SensorProfile bench_profile() {
  SensorProfile p;
  p.name = "bench";
  p.base_iso = 400;
  p.bit_depth = 14;
  p.black_level = 512;
  p.white_level = 16383;
  p.cfa = Cfa::RGGB;
  return p;
}

LinearFrame bench_linear(int h, int w, double value) {
  SensorProfile p = bench_profile();
  LinearFrame f;
  f.height = h;
  f.width = w;
  f.cfa = p.cfa;
  f.bit_depth = p.bit_depth;
  f.black_level = p.black_level;
  f.white_level = p.white_level;
  f.iso = 6400;
  f.analog_gain = 16.0f;
  f.values.assign(std::size_t(h) * w, value);
  return f;
}

void bm_poisson_small_lambda(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_sample(4.5, rng));
}
BENCHMARK(bm_poisson_small_lambda);

void bm_poisson_large_lambda(benchmark::State& state) {
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_sample(1000.0, rng));
}
BENCHMARK(bm_poisson_large_lambda);

void bm_add_shot_noise(benchmark::State& state) {
  LinearFrame clean = bench_linear(512, 512, 1000.0);
  GainHypothesis gain{16.0, 0.5, 8.0};
  for (auto _ : state) {
    LinearFrame out = add_shot_noise(clean, gain, Rng(3));
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(state.iterations() * 512 * 512);
}
BENCHMARK(bm_add_shot_noise)->Unit(benchmark::kMillisecond);

void bm_calibrate_shading(benchmark::State& state) {
  SensorProfile p = bench_profile();
  Rng rng(4);
  DarkBank bank(p);
  for (int i = 0; i < 16; ++i) {
    LinearFrame lin = bench_linear(512, 512, 0.0);
    for (auto& v : lin.values) v = 3.0 * rng.gaussian();
    bank.add_frame(GainKey{6400, ""}, quantize(lin));
  }
  for (auto _ : state) {
    DarkShading s = calibrate_shading(bank, 6400);
    benchmark::DoNotOptimize(s.mean_map.data());
  }
  state.SetItemsProcessed(state.iterations() * 16 * 512 * 512);
}
BENCHMARK(bm_calibrate_shading)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
