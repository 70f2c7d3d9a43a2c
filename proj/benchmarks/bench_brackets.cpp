#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "metriplectic/brackets.hpp"
#include "metriplectic/dynamics.hpp"
#include "metriplectic/verify.hpp"

namespace mp = metriplectic;

namespace {

mp::SimpleSystemSpec piston() {
  mp::IdealGasParams gas;
  gas.U0 = 3.0;
  return mp::builtin_piston(1.0, 1.0, mp::ideal_gas_energy(gas));
}

mp::FluidSystemSpec fluid(std::size_t cells) {
  return mp::make_fluid_system(mp::make_grid(cells, 1.0), mp::FluidParams{0.01, 0.01, {}});
}

}  // namespace

static void BM_KnCombine(benchmark::State& state) {
  double a = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mp::kn_combine(a, 1.1, -0.4, 2.0, 0.7, -1.3, 0.2, 0.9));
    a += 1e-9;
  }
}
BENCHMARK(BM_KnCombine);

// Bind once, then evaluate on precomputed gradients (the per-coordinate cost
// inside the bracket engine).
static void BM_SymmetricFormBound(benchmark::State& state) {
  const auto spec = piston();
  const mp::State x = mp::StateSimple{{1.0}, {3.0}, 0.0};
  const auto form = mp::metric4_symmetric_form(spec).bind(x);
  const auto layout = mp::Layout::simple(1);
  const auto f = mp::grad(mp::random_observable(1, layout, 3), x);
  const auto g = mp::grad(mp::random_observable(2, layout, 3), x);
  const auto m = mp::grad(mp::random_observable(3, layout, 3), x);
  const auto n = mp::grad(mp::random_observable(4, layout, 3), x);
  for (auto _ : state) benchmark::DoNotOptimize(form(f, g, m, n));
}
BENCHMARK(BM_SymmetricFormBound);

// Full evaluation from observables: binding plus four gradients.
static void BM_SymmetricFormObservables(benchmark::State& state) {
  const auto spec = piston();
  const auto b = mp::metric4_symmetric_form(spec);
  const mp::State x = mp::StateSimple{{1.0}, {3.0}, 0.0};
  const auto layout = mp::Layout::simple(1);
  const auto f = mp::random_observable(1, layout, 3);
  const auto g = mp::random_observable(2, layout, 3);
  for (auto _ : state) benchmark::DoNotOptimize(b(f, g, f, g, x));
}
BENCHMARK(BM_SymmetricFormObservables);

static void BM_LiePoissonRigidBody(benchmark::State& state) {
  const auto spec = mp::builtin_rigid_body_thermo(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal(),
                                                  Eigen::Matrix3d::Identity(), mp::linear_entropy_energy());
  const mp::State x = mp::StateLie{{0.3, -1.0, 0.7}, {}, 0.2};
  const auto form = mp::lie_poisson(spec).bind(x);
  const auto f = mp::grad(mp::random_observable(1, mp::Layout::lie(3, 0), 3), x);
  const auto g = mp::grad(mp::random_observable(2, mp::Layout::lie(3, 0), 3), x);
  for (auto _ : state) benchmark::DoNotOptimize(form(f, g));
}
BENCHMARK(BM_LiePoissonRigidBody);

static void BM_FluidViscBind(benchmark::State& state) {
  const auto spec = fluid(static_cast<std::size_t>(state.range(0)));
  mp::SplitMix64 rng(1);
  const mp::State x = mp::sample_state(spec, rng);
  const auto b = mp::visc_bracket4(spec);
  for (auto _ : state) benchmark::DoNotOptimize(b.bind(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FluidViscBind)->RangeMultiplier(2)->Range(32, 512)->Complexity();

static void BM_FluidLiePoisson(benchmark::State& state) {
  const auto spec = fluid(static_cast<std::size_t>(state.range(0)));
  mp::SplitMix64 rng(2);
  const mp::State x = mp::sample_state(spec, rng);
  const auto form = mp::lie_poisson_fluid(spec).bind(x);
  const auto h = mp::grad(mp::fluid_hamiltonian(spec), x);
  const auto s = mp::grad(mp::total_entropy(spec.grid), x);
  for (auto _ : state) benchmark::DoNotOptimize(form(s, h));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FluidLiePoisson)->RangeMultiplier(2)->Range(32, 512)->Complexity();
