#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "metriplectic/dynamics.hpp"
#include "metriplectic/verify.hpp"

namespace mp = metriplectic;

namespace {

mp::InternalEnergyModel gas(double n_moles, double u0) {
  mp::IdealGasParams p;
  p.n_moles = n_moles;
  p.U0 = u0;
  return mp::ideal_gas_energy(p);
}

mp::SystemSpec system_by_index(std::int64_t i) {
  switch (i) {
    case 0:
      return mp::builtin_piston(1.0, 1.0, gas(1.0, 3.0));
    case 1:
      return mp::builtin_two_pistons(1.0, 0.5, 0.5, 1.0, gas(1.0, 3.0), gas(1.0, 1.5), {1.0, 1.0, 2.0});
    case 2:
      return mp::builtin_chemical(Eigen::Matrix3d::Identity() * 2.0, {0.0, 0.0, 0.0}, Eigen::Matrix3d::Identity(),
                                  mp::linear_entropy_energy());
    case 3:
      return mp::builtin_rigid_body_thermo(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal(), Eigen::Matrix3d::Identity(),
                                           mp::linear_entropy_energy());
    default:
      return mp::make_fluid_system(mp::make_grid(32, 1.0), mp::FluidParams{0.01, 0.01, {}});
  }
}

}  // namespace

static void BM_RhsBracket(benchmark::State& state) {
  const auto spec = system_by_index(state.range(0));
  mp::SplitMix64 rng(3);
  const mp::State x = mp::sample_state(spec, rng);
  const mp::BracketEngine engine(spec);
  state.SetLabel(mp::system_name(spec));
  for (auto _ : state) benchmark::DoNotOptimize(engine.rhs(x));
}
BENCHMARK(BM_RhsBracket)->DenseRange(0, 4);

static void BM_RhsEulerLagrange(benchmark::State& state) {
  const auto spec = system_by_index(state.range(0));
  mp::SplitMix64 rng(3);
  const mp::State x = mp::sample_state(spec, rng);
  state.SetLabel(mp::system_name(spec));
  for (auto _ : state) benchmark::DoNotOptimize(mp::rhs_euler_lagrange(spec, x));
}
BENCHMARK(BM_RhsEulerLagrange)->DenseRange(0, 4);

// 1000 rk4 steps with diagnostics.
static void BM_IntegrateTwoPistons(benchmark::State& state) {
  const auto spec = system_by_index(1);
  const mp::State x0 = mp::StateDiscrete{{1.0}, {0.0}, {0.0, 0.0}};
  mp::IntegratorOptions io;
  io.dt = 1e-3;
  io.t_final = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(mp::integrate(spec, x0, io));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_IntegrateTwoPistons)->Unit(benchmark::kMillisecond);

static void BM_SymmetrySuitePiston(benchmark::State& state) {
  const auto spec = system_by_index(0);
  for (auto _ : state) benchmark::DoNotOptimize(mp::run_suite("symmetry", spec, 42, 100));
}
BENCHMARK(BM_SymmetrySuitePiston)->Unit(benchmark::kMillisecond);

static void BM_RandomObservableGradient(benchmark::State& state) {
  const auto layout = mp::Layout::simple(static_cast<std::size_t>(state.range(0)));
  const auto obs = mp::random_observable(5, layout, 3);
  mp::SplitMix64 rng(4);
  std::vector<double> v(layout.size());
  for (double& e : v) e = rng.uniform(-1.0, 1.0);
  const mp::State x = mp::unflatten(layout, v);
  for (auto _ : state) benchmark::DoNotOptimize(mp::grad(obs, x));
}
BENCHMARK(BM_RandomObservableGradient)->Arg(1)->Arg(2)->Arg(4);

BENCHMARK_MAIN();
