#include <benchmark/benchmark.h>

#include <functional>
#include <random>

#include "owg/aom.hpp"
#include "owg/butterworth.hpp"
#include "owg/channel.hpp"
#include "owg/feedback_loop.hpp"
#include "owg/heterodyne.hpp"
#include "owg/predistortion.hpp"
#include "owg/pulse.hpp"
#include "owg/sysid.hpp"

namespace {

using namespace owg;

ComplexEnvelope gate(double duration) {
  PulseSpec spec;
  spec.kind = PulseKind::kGateStandin;
  spec.duration = duration;
  return make_pulse(spec, working_grid(duration, 150e-9));
}

ComplexEnvelope random_envelope(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> s(n);
  for (auto& v : s) v = {g(rng), g(rng)};
  return ComplexEnvelope(TimeGrid(0.0, 1e-9, n), std::move(s));
}

void BM_Filtfilt(benchmark::State& state) {
  const auto filter = design_lowpass(4, 120e6, 2e9);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto& v : x) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(filtfilt(filter, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Filtfilt)->Arg(2000)->Arg(20000);

void BM_HeterodyneRoundTrip(benchmark::State& state) {
  const auto env = gate(static_cast<double>(state.range(0)) * 1e-9);
  for (auto _ : state) benchmark::DoNotOptimize(heterodyne_roundtrip(env, HeterodyneConfig{}));
}
BENCHMARK(BM_HeterodyneRoundTrip)->Arg(180)->Arg(1000);

void BM_ReflectanceTrace(benchmark::State& state) {
  const auto env = gate(static_cast<double>(state.range(0)) * 1e-9);
  const AcoustoOpticParams params;
  const auto amp = env.amplitude();
  for (auto _ : state) benchmark::DoNotOptimize(reflectance_trace(env.grid(), amp, params, default_kappa(params)));
}
BENCHMARK(BM_ReflectanceTrace)->Arg(180)->Arg(1000);

void BM_EstimateKernel(benchmark::State& state) {
  const auto memory = static_cast<std::size_t>(state.range(0));
  const auto in = random_envelope(1000, 2);
  const auto out = volterra_forward(default_distortion_kernel(memory), in);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_kernel(in, out, memory, 1e-6));
}
BENCHMARK(BM_EstimateKernel)->Arg(16)->Arg(64);

void BM_OfflineIterate(benchmark::State& state) {
  const auto target = gate(500e-9);
  const auto model = default_distortion_kernel(static_cast<std::size_t>(state.range(0)));
  LMConfig cfg;
  cfg.cost_tol = 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(offline_iterate(model, target, cfg));
}
BENCHMARK(BM_OfflineIterate)->Arg(16)->Arg(64);

void BM_ClosedLoop(benchmark::State& state) {
  const auto target = gate(500e-9);
  LoopConfig cfg;
  cfg.method = state.range(0) == 0 ? LoopMethod::kTransferFunctionFree : LoopMethod::kTransferFunction;
  cfg.convergence_mase = 0.0;
  for (auto _ : state) {
    SimulatedBench bench(ChannelConfig::distorting(), HeterodyneConfig{});
    benchmark::DoNotOptimize(closed_loop(std::ref(bench), target, cfg));
  }
}
BENCHMARK(BM_ClosedLoop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
