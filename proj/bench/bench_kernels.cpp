#include <benchmark/benchmark.h>

#include "gsdde/integrator.hpp"
#include "gsdde/parallel.hpp"
#include "gsdde/registry.hpp"
#include "gsdde/scenario.hpp"
#include "gsdde/stability.hpp"
#include "gsdde/sublinear.hpp"

namespace {

using namespace gsdde;

Backend backend_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Backend::Serial : Backend::OpenMP;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial"
                                     : "openmp x" + std::to_string(max_threads()));
}

struct Fixture {
  RegistryModel reg = example41(0.01);
  TimeGrid grid{20.0, 20000};
  ValidatedModel model = validate_model(reg.model, reg.history, grid);
  VolatilityGrid vol = build_volatility_grid(reg.model.vol, 5);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_GenerateEnsemble(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto e = generate_ensemble(f.vol, 20, f.grid, 42, backend_of(state));
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * 5 * 20 * 20000);
  label(state);
}

void BM_IntegrateEnsemble(benchmark::State& state) {
  const auto& f = fixture();
  const auto scenario = generate_ensemble(f.vol, 20, f.grid, 42, Backend::Serial);
  for (auto _ : state) {
    auto paths = integrate_ensemble(f.model, scenario, backend_of(state));
    benchmark::DoNotOptimize(paths);
  }
  state.SetItemsProcessed(state.iterations() * 5 * 20 * 20000);
  label(state);
}

void BM_EstimateSeries(benchmark::State& state) {
  const auto& f = fixture();
  const auto paths = integrate_ensemble(
      f.model, generate_ensemble(f.vol, 20, f.grid, 42, Backend::Serial),
      Backend::Serial);
  const auto phi = Functional::abs_power(2.0);
  for (auto _ : state) {
    auto s = estimate_series(paths, phi, backend_of(state));
    benchmark::DoNotOptimize(s);
  }
  label(state);
}

void BM_StabilitySweep(benchmark::State& state) {
  const auto& f = fixture();
  CheckGrid grid = default_check_grid();
  grid.t = Axis{0.0, 2.0, 0.5};
  for (auto _ : state) {
    auto r = check_stability_assumption(f.reg.lyapunov, f.model, grid,
                                        kDefaultCheckTolerance, backend_of(state));
    benchmark::DoNotOptimize(r);
  }
  label(state);
}

void BM_LipschitzSweep(benchmark::State& state) {
  const auto& f = fixture();
  CheckGrid grid = default_check_grid();
  grid.t = Axis{0.0, 2.0, 0.5};
  for (auto _ : state) {
    auto r = check_delay_lipschitz(f.model, 1.0, grid, kDefaultCheckTolerance,
                                   backend_of(state));
    benchmark::DoNotOptimize(r);
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_GenerateEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilitySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LipschitzSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
