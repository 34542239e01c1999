#include <benchmark/benchmark.h>

#include "lambdaknob/constants.hpp"
#include "lambdaknob/liouville.hpp"
#include "lambdaknob/pulse.hpp"
#include "lambdaknob/quadrature.hpp"
#include "lambdaknob/response.hpp"

using namespace lambdaknob;

namespace {

const double kGamma = 3.0 * constants::pi * 1e6;

SystemParams rb_params() {
  SystemParams p;
  p.gamma1 = p.gamma2 = kGamma;
  p.lambda13 = 780e-9;
  p.density_per_cc = 2e12;
  return validate_params(p);
}

DriveFields rb_drives() { return DriveFields{10.0 * kGamma, 5.0 * kGamma, 0.0, 0.0}; }

}  // namespace

static void BM_AssembleGenerator(benchmark::State& state) {
  const SystemParams params = rb_params();
  const DriveFields drives = rb_drives();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_generator(params, drives));
}
BENCHMARK(BM_AssembleGenerator);

static void BM_SteadyState(benchmark::State& state) {
  const Generator gen = assemble_generator(rb_params(), rb_drives());
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(gen));
}
BENCHMARK(BM_SteadyState);

static void BM_ResponseSolve(benchmark::State& state) {
  const ResponseProblem problem(rb_params(), rb_drives());
  double d4 = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(problem.chi_norm(d4));
    d4 += 1e-4 * kGamma;  // sweep so no factorization could be reused
  }
}
BENCHMARK(BM_ResponseSolve);

static void BM_SusceptibilityPoint(benchmark::State& state) {
  const SystemParams params = rb_params();
  const DriveFields drives = rb_drives();
  for (auto _ : state) benchmark::DoNotOptimize(susceptibility(params, drives, 0.1 * kGamma));
}
BENCHMARK(BM_SusceptibilityPoint);

static void BM_DopplerAverage(benchmark::State& state) {
  const SystemParams params = rb_params();
  DriveFields drives = rb_drives();
  drives.control_G = 200.0 * kGamma;
  DopplerSpec doppler;
  doppler.delta = 1.33e9;
  doppler.nodes = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(doppler_susceptibility(params, drives, 0.0, doppler));
}
BENCHMARK(BM_DopplerAverage)->Arg(16)->Arg(64)->Arg(128);

static void BM_HermiteRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hermite_rule(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_HermiteRule)->Arg(64)->Arg(128);

static void BM_GroupIndex(benchmark::State& state) {
  const SystemParams params = rb_params();
  const DriveFields drives = rb_drives();
  for (auto _ : state) benchmark::DoNotOptimize(group_index(params, drives, 0.0));
}
BENCHMARK(BM_GroupIndex);

static void BM_PulsePropagate(benchmark::State& state) {
  const SystemParams params = rb_params();
  const DriveFields drives = rb_drives();
  const pulse::PulseSpec spec =
      pulse::from_spectral_width(constants::two_pi * 120e3, params.omega13(), 0.06);
  pulse::GridOptions grid;
  grid.samples = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(pulse::propagate(spec, params, drives, {}, grid));
}
BENCHMARK(BM_PulsePropagate)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
