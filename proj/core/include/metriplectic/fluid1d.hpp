#pragma once

#include <cstddef>
#include <string>

#include "metriplectic/brackets.hpp"
#include "metriplectic/observable.hpp"
#include "metriplectic/state.hpp"
#include "metriplectic/vector_ops.hpp"

namespace metriplectic {

/// Uniform periodic grid on [0, length).
struct Grid1D {
  std::size_t cells = 0;
  double length = 1.0;

  [[nodiscard]] double dx() const noexcept { return length / static_cast<double>(cells); }
  [[nodiscard]] double center(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) * dx();
  }
};

/// Throws SpecError unless cells >= 4 and length > 0.
[[nodiscard]] Grid1D make_grid(std::size_t cells, double length = 1.0);

/// Internal energy density e(rho, s) = c rho^gamma exp(s / (c_v rho)).
struct FluidEos {
  double gamma = 1.4;
  double c_v = 1.0;
  double c = 1.0;

  [[nodiscard]] double energy(double rho, double s) const;
  [[nodiscard]] double d_rho(double rho, double s) const;
  /// T = de/ds.
  [[nodiscard]] double d_s(double rho, double s) const;
};

struct FluidParams {
  double mu = 0.0;     // viscosity
  double kappa = 0.0;  // heat conduction
  FluidEos eos;
};

struct FluidSystemSpec {
  std::string name = "fluid1d";
  Grid1D grid;
  FluidParams params;
};

[[nodiscard]] FluidSystemSpec make_fluid_system(Grid1D grid, FluidParams params);

/// Per-cell functional derivatives (1/dx) df/du_i.
struct FieldGradient {
  Vec m;
  Vec rho;
  Vec s;
};

[[nodiscard]] FieldGradient functional_gradient(const Gradient& g, const Grid1D& grid);
[[nodiscard]] FieldGradient functional_gradient(const Observable& f, const StateField1D& x,
                                                const Grid1D& grid);

/// (Dw)_i = (w_{i+1} - w_{i-1}) / (2 dx) with periodic wrap.
[[nodiscard]] Vec central_difference(VecView w, double dx);

[[nodiscard]] Vec velocity_field(const StateField1D& x);
/// T_i = de/ds; throws NonpositiveTemperature with the cell index.
[[nodiscard]] Vec temperature_field(const FluidSystemSpec& spec, const StateField1D& x);
/// delta h / delta rho = -u^2/2 + de/drho.
[[nodiscard]] Vec pressure_potential(const FluidSystemSpec& spec, const StateField1D& x);

/// h = dx sum (m^2 / (2 rho) + e(rho, s)).
[[nodiscard]] double fluid_energy(const FluidSystemSpec& spec, const StateField1D& x);
[[nodiscard]] Observable fluid_hamiltonian(const FluidSystemSpec& spec);
[[nodiscard]] Observable total_mass(const Grid1D& grid);
[[nodiscard]] Observable total_entropy(const Grid1D& grid);
[[nodiscard]] Observable total_momentum(const Grid1D& grid);

[[nodiscard]] Bracket2 lie_poisson_fluid(const FluidSystemSpec& spec);
[[nodiscard]] Bracket4 visc_bracket4(const FluidSystemSpec& spec);
[[nodiscard]] Bracket4 heat_bracket4(const FluidSystemSpec& spec);

/// Closed forms of b4(f, h; g, h) for the viscous and the heat bracket.
struct ReducedFluidBrackets {
  Bracket2 visc;
  Bracket2 heat;
};
[[nodiscard]] ReducedFluidBrackets reduced_2brackets(const FluidSystemSpec& spec);

/// Strong-form semi-discrete equations, written without brackets:
///   m'   = -D(m u) - m Du - rho D(pi) - s DT + D(mu Du)
///   rho' = -D(rho u)
///   s'   = -D(s u) + mu (Du)^2 / T + kappa (DT)^2 / T^2 + D(kappa DT / T)
[[nodiscard]] StateField1D fluid_rhs_strong(const FluidSystemSpec& spec, const StateField1D& x);

}  // namespace metriplectic
