// Serial reference vs OpenMP paths of the data-parallel kernels.
//
//   ./build/bench/tembp_bench --benchmark_filter=Gram

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "tembp/experiment.hpp"
#include "tembp/recon.hpp"
#include "tembp/tem.hpp"

namespace {

using namespace tembp;

const AnalyticSignal& test_signal() {
  static const AnalyticSignal sig = AnalyticSignal::modulated(
      2 * std::numbers::pi * 50, 2 * std::numbers::pi * 10, 2 * std::numbers::pi * 2.5);
  return sig;
}

const MergedSequence& merged() {
  static const MergedSequence m = [] {
    const TemParams p = TemParams::from_interval(1.0, 1.0 / 30, 3.0, 2.0);
    const auto trains = encode_two_channel(test_signal(), p, {-0.5, 0.5}, 1.5 * p.delta);
    return interleave(trains.a, trains.b);
  }();
  return m;
}

const BandSpec& band() {
  static const BandSpec b =
      band_spec_from_edges(2 * std::numbers::pi * 35, 2 * std::numbers::pi * 65);
  return b;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_GramBandpass(benchmark::State& state) {
  const KnotSet ks = knots_and_shifts(merged().times);
  const GramOptions opts{1e-9, exec_of(state)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_gram_bandpass(merged(), ks, band(), opts));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_GramBandpass)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvaluateGrid(benchmark::State& state) {
  static const Reconstruction rec = reconstruct_bandpass(merged(), band());
  const auto ts = evaluation_grid({-0.5, 0.5}, 1e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_model_grid(rec.model, ts, exec_of(state)));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_EvaluateGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
