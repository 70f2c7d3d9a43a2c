#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "metriplectic/dynamics.hpp"
#include "metriplectic/error.hpp"
#include "metriplectic/fluid1d.hpp"
#include "metriplectic/verify.hpp"

namespace mp = metriplectic;

namespace {

constexpr auto kField = mp::StateClass::Field1D;

mp::FluidSystemSpec fluid(double mu, double kappa, std::size_t cells = 16) {
  return mp::make_fluid_system(mp::make_grid(cells, 1.0), mp::FluidParams{mu, kappa, {}});
}

mp::StateField1D wavy_state(const mp::Grid1D& grid) {
  mp::StateField1D x;
  for (std::size_t i = 0; i < grid.cells; ++i) {
    const double c = 2.0 * std::numbers::pi * grid.center(i);
    x.m.push_back(0.3 * std::sin(c));
    x.rho.push_back(1.0 + 0.2 * std::cos(c));
    x.s.push_back(0.1 * std::sin(2.0 * c) + 0.05);
  }
  return x;
}

mp::StateField1D uniform_state(const mp::Grid1D& grid, double m, double rho, double s) {
  return {mp::Vec(grid.cells, m), mp::Vec(grid.cells, rho), mp::Vec(grid.cells, s)};
}

/// dx * sum over one block of phi(u_i).
mp::Observable block_functional(const mp::Grid1D& grid, std::size_t block, double (*phi)(double)) {
  return mp::Observable(kField, [grid, block, phi](const mp::State& xs) {
    const auto& x = std::get<mp::StateField1D>(xs);
    const mp::Vec& u = block == 0 ? x.m : (block == 1 ? x.rho : x.s);
    double acc = 0.0;
    for (double v : u) acc += phi(v);
    return grid.dx() * acc;
  });
}

/// dx * sum (m_i rho_{i+1} + s_i^2 m_i): translation invariant, nonlinear.
mp::Observable coupled_functional(const mp::Grid1D& grid) {
  return mp::Observable(kField, [grid](const mp::State& xs) {
    const auto& x = std::get<mp::StateField1D>(xs);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.cells; ++i) {
      acc += x.m[i] * x.rho[(i + 1) % grid.cells] + x.s[i] * x.s[i] * x.m[i];
    }
    return grid.dx() * acc;
  });
}

double max_abs(const mp::Vec& v) {
  double out = 0.0;
  for (double e : v) out = std::max(out, std::abs(e));
  return out;
}

}  // namespace

TEST(Grid, RejectsTooFewCells) {
  EXPECT_THROW((void)mp::make_grid(3), mp::Error);
  EXPECT_DOUBLE_EQ(mp::make_grid(8, 2.0).dx(), 0.25);
}

TEST(FunctionalGradient, TotalEntropyIsOne) {
  const auto spec = fluid(0.0, 0.0);
  const auto g = mp::functional_gradient(mp::total_entropy(spec.grid), wavy_state(spec.grid), spec.grid);
  for (double v : g.s) EXPECT_NEAR(v, 1.0, 1e-14);
  EXPECT_EQ(max_abs(g.m), 0.0);
}

TEST(FunctionalGradient, KineticEnergyGivesVelocity) {
  const auto spec = fluid(0.0, 0.0);
  const auto x = wavy_state(spec.grid);
  const mp::Observable kinetic(kField, [dx = spec.grid.dx()](const mp::State& xs) {
    const auto& s = std::get<mp::StateField1D>(xs);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.m.size(); ++i) acc += s.m[i] * s.m[i] / (2.0 * s.rho[i]);
    return dx * acc;
  });
  const auto g = mp::functional_gradient(kinetic, x, spec.grid);
  const auto u = mp::velocity_field(x);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(g.m[i], u[i], 1e-9);
}

TEST(FunctionalGradient, DensitySquaredByFiniteDifferences) {
  const auto spec = fluid(0.0, 0.0);
  const auto x = wavy_state(spec.grid);
  const auto f = block_functional(spec.grid, 1, [](double r) { return r * r; });
  const auto g = mp::functional_gradient(f, x, spec.grid);
  for (std::size_t i = 0; i < x.rho.size(); ++i) EXPECT_NEAR(g.rho[i], 2.0 * x.rho[i], 1e-8);
}

TEST(FluidHamiltonian, AnalyticGradientMatchesFiniteDifferences) {
  const auto spec = fluid(0.0, 0.0);
  const mp::State x = wavy_state(spec.grid);
  const auto h = mp::fluid_hamiltonian(spec);
  const auto exact = mp::grad(h, x);
  const auto approx = mp::fd_gradient(h, x);
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(exact[i], approx[i], 1e-9) << i;
  const auto fg = mp::functional_gradient(exact, spec.grid);
  const auto pi = mp::pressure_potential(spec, std::get<mp::StateField1D>(x));
  const auto T = mp::temperature_field(spec, std::get<mp::StateField1D>(x));
  for (std::size_t i = 0; i < pi.size(); ++i) {
    EXPECT_NEAR(fg.rho[i], pi[i], 1e-12);
    EXPECT_NEAR(fg.s[i], T[i], 1e-12);
  }
}

TEST(CentralDifference, PeriodicWrap) {
  const mp::Vec w = {0.0, 1.0, 4.0, 9.0};
  const auto d = mp::central_difference(w, 0.5);
  EXPECT_EQ(d, (mp::Vec{(1.0 - 9.0), (4.0 - 0.0), (9.0 - 1.0), (0.0 - 4.0)}));
}

TEST(LiePoissonFluid, AntisymmetryAndCasimir) {
  const auto spec = fluid(0.0, 0.0);
  const mp::State x = wavy_state(spec.grid);
  const auto lp = mp::lie_poisson_fluid(spec);
  const auto layout = mp::Layout::field(spec.grid.cells);
  const auto f = mp::random_observable(1, layout, 3);
  const auto g = mp::random_observable(2, layout, 3);
  EXPECT_EQ(lp(f, f, x), 0.0);
  EXPECT_EQ(lp(f, g, x), -lp(g, f, x));
  EXPECT_NEAR(lp(mp::total_mass(spec.grid), g, x), 0.0, 1e-13);
  EXPECT_NEAR(lp(mp::total_mass(spec.grid), mp::fluid_hamiltonian(spec), x), 0.0, 1e-13);
}

TEST(LiePoissonFluid, UniformStateTranslationInvariantFunctionals) {
  const auto spec = fluid(0.0, 0.0);
  const mp::State x = uniform_state(spec.grid, 0.4, 1.2, 0.1);
  const auto lp = mp::lie_poisson_fluid(spec);
  const auto f = coupled_functional(spec.grid);
  const auto g = block_functional(spec.grid, 0, [](double m) { return m * m; });
  EXPECT_NEAR(lp(f, g, x), 0.0, 1e-9);
}

TEST(ViscBracket, ZeroViscosityVanishes) {
  const auto spec = fluid(0.0, 0.5);
  const mp::State x = wavy_state(spec.grid);
  const auto h = mp::fluid_hamiltonian(spec);
  const auto s = mp::total_entropy(spec.grid);
  EXPECT_EQ(mp::visc_bracket4(spec)(s, h, s, h, x), 0.0);
}

TEST(ViscBracket, EntropyProduction) {
  const auto spec = fluid(0.3, 0.0);
  const auto xf = wavy_state(spec.grid);
  const mp::State x = xf;
  const auto h = mp::fluid_hamiltonian(spec);
  const auto s = mp::total_entropy(spec.grid);
  const auto du = mp::central_difference(mp::velocity_field(xf), spec.grid.dx());
  const auto T = mp::temperature_field(spec, xf);
  double expected = 0.0;
  for (std::size_t i = 0; i < du.size(); ++i) expected += 0.3 / T[i] * du[i] * du[i];
  expected *= spec.grid.dx();
  EXPECT_NEAR(mp::visc_bracket4(spec)(s, h, s, h, x), expected, 1e-12 * expected);
  EXPECT_GT(expected, 0.0);
}

TEST(HeatBracket, EntropyProductionAndUniformTemperature) {
  const auto spec = fluid(0.0, 0.2);
  const auto xf = wavy_state(spec.grid);
  const auto h = mp::fluid_hamiltonian(spec);
  const auto s = mp::total_entropy(spec.grid);
  const auto T = mp::temperature_field(spec, xf);
  const auto dT = mp::central_difference(T, spec.grid.dx());
  double expected = 0.0;
  for (std::size_t i = 0; i < dT.size(); ++i) expected += 0.2 / (T[i] * T[i]) * dT[i] * dT[i];
  expected *= spec.grid.dx();
  EXPECT_NEAR(mp::heat_bracket4(spec)(s, h, s, h, mp::State{xf}), expected, 1e-12 * expected);

  const mp::State flat = uniform_state(spec.grid, 0.2, 1.0, 0.3);
  const auto f = mp::random_observable(4, mp::Layout::field(spec.grid.cells), 3);
  EXPECT_NEAR(mp::heat_bracket4(spec)(f, h, s, h, flat), 0.0, 1e-14);
  EXPECT_EQ(mp::heat_bracket4(fluid(0.0, 0.0))(s, h, s, h, mp::State{xf}), 0.0);
}

TEST(DissipativeBrackets, SymmetriesOnRandomFunctionals) {
  const auto spec = fluid(0.3, 0.2);
  const mp::State x = wavy_state(spec.grid);
  const auto layout = mp::Layout::field(spec.grid.cells);
  for (const auto& b : {mp::visc_bracket4(spec), mp::heat_bracket4(spec)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto f = mp::random_observable(4 * seed, layout, 3);
      const auto g = mp::random_observable(4 * seed + 1, layout, 3);
      const auto m = mp::random_observable(4 * seed + 2, layout, 3);
      const auto n = mp::random_observable(4 * seed + 3, layout, 3);
      const double v = b(f, g, m, n, x);
      EXPECT_EQ(v, -b(g, f, m, n, x));
      EXPECT_EQ(v, -b(f, g, n, m, x));
      EXPECT_EQ(v, b(m, n, f, g, x));
    }
  }
}

TEST(ReducedBrackets, MatchReductionOfFourBrackets) {
  const auto spec = fluid(0.3, 0.2);
  const mp::State x = wavy_state(spec.grid);
  const auto h = mp::fluid_hamiltonian(spec);
  const auto reduced = mp::reduced_2brackets(spec);
  const auto visc = mp::reduce_to_2(mp::visc_bracket4(spec), h);
  const auto heat = mp::reduce_to_2(mp::heat_bracket4(spec), h);
  const auto layout = mp::Layout::field(spec.grid.cells);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = mp::random_observable(100 + 2 * seed, layout, 3);
    const auto g = mp::random_observable(101 + 2 * seed, layout, 3);
    const double a = heat(f, g, x), b = reduced.heat(f, g, x);
    EXPECT_LE(std::abs(a - b), 1e-10 * std::max({1.0, std::abs(a), std::abs(b)}));
    const double c = visc(f, g, x), d = reduced.visc(f, g, x);
    EXPECT_LE(std::abs(c - d), 1e-10 * std::max({1.0, std::abs(c), std::abs(d)}));
    EXPECT_GE(reduced.visc(f, f, x), -1e-12);
  }
  const auto s = mp::total_entropy(spec.grid);
  EXPECT_GE(reduced.heat(s, s, x), 0.0);
}

TEST(StrongForm, MatchesBracketEngine) {
  const auto spec = fluid(0.05, 0.03);
  const mp::State x = wavy_state(spec.grid);
  const auto strong = mp::flatten(mp::fluid_rhs_strong(spec, std::get<mp::StateField1D>(x)));
  const auto bracket = mp::flatten(mp::rhs_bracket(spec, x));
  double scale = 1.0;
  for (double v : strong) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < strong.size(); ++i) EXPECT_NEAR(strong[i], bracket[i], 1e-8 * scale) << i;
}

TEST(StrongForm, MassRateSumsToZero) {
  const auto spec = fluid(0.05, 0.03);
  const auto rate = mp::fluid_rhs_strong(spec, wavy_state(spec.grid));
  double total = 0.0;
  for (double v : rate.rho) total += v;
  EXPECT_NEAR(total, 0.0, 1e-13);
}

TEST(Fluid, NonpositiveDensityRejectedWithCell) {
  const auto spec = fluid(0.1, 0.1);
  auto x = wavy_state(spec.grid);
  x.rho[5] = 0.0;
  try {
    (void)mp::visc_bracket4(spec).bind(x);
    FAIL();
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::DomainViolation);
    EXPECT_EQ(e.index().value_or(99), 5u);
  }
}
