#include "metriplectic/fluid1d.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "metriplectic/error.hpp"

namespace metriplectic {

namespace {

const StateField1D& field_state(const State& x, const Grid1D& grid, const std::string& who) {
  if (state_class(x) != StateClass::Field1D) {
    throw Error(ErrorCode::ArityMismatch, who + " is defined on Field1D states");
  }
  const auto& f = std::get<StateField1D>(x);
  if (f.m.size() != grid.cells || f.rho.size() != grid.cells || f.s.size() != grid.cells) {
    throw Error(ErrorCode::DimensionMismatch, who + ": state does not match the grid");
  }
  for (std::size_t i = 0; i < grid.cells; ++i) {
    if (!(f.rho[i] > 0.0)) {
      throw Error(ErrorCode::DomainViolation, "density must be positive", i);
    }
  }
  return f;
}

// D applied to the functional derivative (1/dx) raw, written into out.
void scaled_difference(VecView raw, double inv_dx, double inv_2dx, Vec& out) {
  const std::size_t n = raw.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double up = raw[(i + 1) % n];
    const double down = raw[(i + n - 1) % n];
    out[i] = (up * inv_dx - down * inv_dx) * inv_2dx;
  }
}

// D(w * raw / dx) for a fixed weight field w.
void weighted_difference(VecView w, VecView raw, double inv_dx, double inv_2dx, Vec& out) {
  const std::size_t n = raw.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    out[i] = (w[ip] * (raw[ip] * inv_dx) - w[im] * (raw[im] * inv_dx)) * inv_2dx;
  }
}

}  // namespace

Grid1D make_grid(std::size_t cells, double length) {
  if (cells < 4) throw Error(ErrorCode::SpecError, "grid needs at least 4 cells");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::SpecError, "grid length must be positive");
  }
  return Grid1D{cells, length};
}

double FluidEos::energy(double rho, double s) const {
  return c * std::pow(rho, gamma) * std::exp(s / (c_v * rho));
}

double FluidEos::d_rho(double rho, double s) const {
  return energy(rho, s) * (gamma / rho - s / (c_v * rho * rho));
}

double FluidEos::d_s(double rho, double s) const { return energy(rho, s) / (c_v * rho); }

FluidSystemSpec make_fluid_system(Grid1D grid, FluidParams params) {
  grid = make_grid(grid.cells, grid.length);
  if (!(params.mu >= 0.0) || !std::isfinite(params.mu)) {
    throw Error(ErrorCode::SpecError, "viscosity mu must be nonnegative");
  }
  if (!(params.kappa >= 0.0) || !std::isfinite(params.kappa)) {
    throw Error(ErrorCode::SpecError, "heat conduction kappa must be nonnegative");
  }
  const auto& e = params.eos;
  if (!(e.gamma > 0.0) || !(e.c_v > 0.0) || !(e.c > 0.0)) {
    throw Error(ErrorCode::SpecError, "equation of state needs gamma, c_v, c > 0");
  }
  FluidSystemSpec spec;
  spec.grid = grid;
  spec.params = params;
  return spec;
}

FieldGradient functional_gradient(const Gradient& g, const Grid1D& grid) {
  const double inv_dx = 1.0 / grid.dx();
  auto scale = [inv_dx](std::span<const double> raw) {
    Vec out(raw.begin(), raw.end());
    for (double& v : out) v *= inv_dx;
    return out;
  };
  return {scale(g.m()), scale(g.rho()), scale(g.entropies())};
}

FieldGradient functional_gradient(const Observable& f, const StateField1D& x, const Grid1D& grid) {
  const State s = x;
  field_state(s, grid, "functional_gradient");
  return functional_gradient(grad(f, s), grid);
}

Vec central_difference(VecView w, double dx) {
  const std::size_t n = w.size();
  Vec out(n);
  const double inv_2dx = 1.0 / (2.0 * dx);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (w[(i + 1) % n] - w[(i + n - 1) % n]) * inv_2dx;
  }
  return out;
}

Vec velocity_field(const StateField1D& x) {
  Vec u(x.m.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = x.m[i] / x.rho[i];
  return u;
}

Vec temperature_field(const FluidSystemSpec& spec, const StateField1D& x) {
  Vec t(x.rho.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = spec.params.eos.d_s(x.rho[i], x.s[i]);
    if (!(t[i] > 0.0)) {
      throw Error(ErrorCode::NonpositiveTemperature, "temperature must be positive", i);
    }
  }
  return t;
}

Vec pressure_potential(const FluidSystemSpec& spec, const StateField1D& x) {
  Vec pi(x.rho.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double u = x.m[i] / x.rho[i];
    pi[i] = -0.5 * u * u + spec.params.eos.d_rho(x.rho[i], x.s[i]);
  }
  return pi;
}

double fluid_energy(const FluidSystemSpec& spec, const StateField1D& x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.m.size(); ++i) {
    acc += x.m[i] * x.m[i] / (2.0 * x.rho[i]) + spec.params.eos.energy(x.rho[i], x.s[i]);
  }
  return spec.grid.dx() * acc;
}

Observable fluid_hamiltonian(const FluidSystemSpec& spec) {
  return Observable(
      StateClass::Field1D,
      [spec](const State& x) {
        return fluid_energy(spec, field_state(x, spec.grid, "fluid_hamiltonian"));
      },
      [spec](const State& xs) {
        const auto& x = field_state(xs, spec.grid, "fluid_hamiltonian");
        const std::size_t n = spec.grid.cells;
        const double dx = spec.grid.dx();
        Gradient g(Layout::field(n));
        auto gm = g.m();
        auto gr = g.rho();
        auto gs = g.entropies();
        for (std::size_t i = 0; i < n; ++i) {
          const double u = x.m[i] / x.rho[i];
          gm[i] = dx * u;
          gr[i] = dx * (-0.5 * u * u + spec.params.eos.d_rho(x.rho[i], x.s[i]));
          gs[i] = dx * spec.params.eos.d_s(x.rho[i], x.s[i]);
        }
        return g;
      },
      "h");
}

namespace {

Observable block_total(const Grid1D& grid, std::size_t block, std::string name) {
  const std::size_t n = grid.cells;
  const double dx = grid.dx();
  return Observable(
      StateClass::Field1D,
      [n, dx, block](const State& xs) {
        const auto& x = std::get<StateField1D>(xs);
        const Vec& v = block == 0 ? x.m : (block == 1 ? x.rho : x.s);
        if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "state does not match the grid");
        double acc = 0.0;
        for (double vi : v) acc += vi;
        return dx * acc;
      },
      [n, dx, block](const State& xs) {
        if (std::get<StateField1D>(xs).m.size() != n) {
          throw Error(ErrorCode::DimensionMismatch, "state does not match the grid");
        }
        const Layout layout = Layout::field(n);
        Gradient g(layout);
        for (std::size_t i = 0; i < n; ++i) g[layout.offset(block) + i] = dx;
        return g;
      },
      std::move(name));
}

}  // namespace

Observable total_mass(const Grid1D& grid) { return block_total(grid, 1, "mass"); }
Observable total_entropy(const Grid1D& grid) { return block_total(grid, 2, "S_total"); }
Observable total_momentum(const Grid1D& grid) { return block_total(grid, 0, "momentum"); }

Bracket2 lie_poisson_fluid(const FluidSystemSpec& spec) {
  return Bracket2(
      Bracket2::Kind::Symplectic, StateClass::Field1D,
      [spec](const State& xs) -> Form2 {
        const auto& x = field_state(xs, spec.grid, "lie_poisson_fluid");
        const double dx = spec.grid.dx();
        // X_i(f,g) = m g_m D(f_m) + g_rho D(rho f_m) + g_s D(s f_m); the
        // bracket is dx sum (X(f,g) - X(g,f)), cell by cell.
        return [m = x.m, rho = x.rho, s = x.s, dx](const Gradient& f, const Gradient& g) {
          const double inv_dx = 1.0 / dx;
          const double inv_2dx = 1.0 / (2.0 * dx);
          Vec df, rf, sf, dg, rg, sg;
          scaled_difference(f.m(), inv_dx, inv_2dx, df);
          weighted_difference(rho, f.m(), inv_dx, inv_2dx, rf);
          weighted_difference(s, f.m(), inv_dx, inv_2dx, sf);
          scaled_difference(g.m(), inv_dx, inv_2dx, dg);
          weighted_difference(rho, g.m(), inv_dx, inv_2dx, rg);
          weighted_difference(s, g.m(), inv_dx, inv_2dx, sg);
          const auto fm = f.m();
          const auto fr = f.rho();
          const auto fs = f.entropies();
          const auto gm = g.m();
          const auto gr = g.rho();
          const auto gs = g.entropies();
          double acc = 0.0;
          for (std::size_t i = 0; i < m.size(); ++i) {
            const double xfg = m[i] * (gm[i] * inv_dx) * df[i] + (gr[i] * inv_dx) * rf[i] +
                               (gs[i] * inv_dx) * sf[i];
            const double xgf = m[i] * (fm[i] * inv_dx) * dg[i] + (fr[i] * inv_dx) * rg[i] +
                               (fs[i] * inv_dx) * sg[i];
            acc += xfg - xgf;
          }
          return dx * acc;
        };
      },
      "lie_poisson_fluid");
}

namespace {

// dx sum_i KN_i(a_i, b_i) with a_i(f,g) = w_i (D f_blk)_i (D g_blk)_i and
// b_i(f,g) = f_s,i g_s,i in functional-derivative units.
Form4 pointwise_kn(Vec weight, double dx, bool on_entropy_block) {
  return [weight = std::move(weight), dx, on_entropy_block](
             const Gradient& f, const Gradient& g, const Gradient& m, const Gradient& n) {
    const double inv_dx = 1.0 / dx;
    const double inv_2dx = 1.0 / (2.0 * dx);
    auto block = [on_entropy_block](const Gradient& x) {
      return on_entropy_block ? x.entropies() : x.m();
    };
    Vec df, dg, dm, dn;
    scaled_difference(block(f), inv_dx, inv_2dx, df);
    scaled_difference(block(g), inv_dx, inv_2dx, dg);
    scaled_difference(block(m), inv_dx, inv_2dx, dm);
    scaled_difference(block(n), inv_dx, inv_2dx, dn);
    const auto fs = f.entropies();
    const auto gs = g.entropies();
    const auto ms = m.entropies();
    const auto ns = n.entropies();
    double acc = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      const double w = weight[i];
      const double f_s = fs[i] * inv_dx;
      const double g_s = gs[i] * inv_dx;
      const double m_s = ms[i] * inv_dx;
      const double n_s = ns[i] * inv_dx;
      acc += kn_combine(w * (df[i] * dm[i]), w * (df[i] * dn[i]), w * (dg[i] * dm[i]),
                        w * (dg[i] * dn[i]), f_s * m_s, f_s * n_s, g_s * m_s, g_s * n_s);
    }
    return dx * acc;
  };
}

}  // namespace

Bracket4 visc_bracket4(const FluidSystemSpec& spec) {
  return Bracket4(
      StateClass::Field1D,
      [spec](const State& xs) -> Form4 {
        const auto& x = field_state(xs, spec.grid, "visc_bracket4");
        Vec w = temperature_field(spec, x);
        for (double& v : w) v = spec.params.mu / v;
        return pointwise_kn(std::move(w), spec.grid.dx(), false);
      },
      "visc_bracket4");
}

Bracket4 heat_bracket4(const FluidSystemSpec& spec) {
  return Bracket4(
      StateClass::Field1D,
      [spec](const State& xs) -> Form4 {
        const auto& x = field_state(xs, spec.grid, "heat_bracket4");
        Vec w = temperature_field(spec, x);
        for (double& v : w) v = spec.params.kappa / (v * v);
        return pointwise_kn(std::move(w), spec.grid.dx(), true);
      },
      "heat_bracket4");
}

ReducedFluidBrackets reduced_2brackets(const FluidSystemSpec& spec) {
  Bracket2 visc(
      Bracket2::Kind::Metric, StateClass::Field1D,
      [spec](const State& xs) -> Form2 {
        const auto& x = field_state(xs, spec.grid, "visc2");
        const double dx = spec.grid.dx();
        const Vec t = temperature_field(spec, x);
        const Vec du = central_difference(velocity_field(x), dx);
        return [t, du, dx, mu = spec.params.mu](const Gradient& f, const Gradient& g) {
          const double inv_dx = 1.0 / dx;
          const double inv_2dx = 1.0 / (2.0 * dx);
          Vec df, dg;
          scaled_difference(f.m(), inv_dx, inv_2dx, df);
          scaled_difference(g.m(), inv_dx, inv_2dx, dg);
          const auto fs = f.entropies();
          const auto gs = g.entropies();
          double acc = 0.0;
          for (std::size_t i = 0; i < t.size(); ++i) {
            const double f_s = fs[i] * inv_dx;
            const double g_s = gs[i] * inv_dx;
            acc += mu * (t[i] * df[i] * dg[i] - df[i] * du[i] * g_s - du[i] * f_s * dg[i] +
                         du[i] * du[i] * f_s * g_s / t[i]);
          }
          return dx * acc;
        };
      },
      "visc2");
  Bracket2 heat(
      Bracket2::Kind::Metric, StateClass::Field1D,
      [spec](const State& xs) -> Form2 {
        const auto& x = field_state(xs, spec.grid, "heat2");
        const double dx = spec.grid.dx();
        const Vec t = temperature_field(spec, x);
        const Vec dt = central_difference(t, dx);
        return [t, dt, dx, kappa = spec.params.kappa](const Gradient& f, const Gradient& g) {
          const double inv_dx = 1.0 / dx;
          const double inv_2dx = 1.0 / (2.0 * dx);
          Vec df, dg;
          scaled_difference(f.entropies(), inv_dx, inv_2dx, df);
          scaled_difference(g.entropies(), inv_dx, inv_2dx, dg);
          const auto fs = f.entropies();
          const auto gs = g.entropies();
          double acc = 0.0;
          for (std::size_t i = 0; i < t.size(); ++i) {
            // Discrete stand-in for grad(f_s / T): central differences have no
            // exact product rule, so expand it the way the 4-bracket does.
            const double xf = df[i] / t[i] - dt[i] * (fs[i] * inv_dx) / (t[i] * t[i]);
            const double xg = dg[i] / t[i] - dt[i] * (gs[i] * inv_dx) / (t[i] * t[i]);
            acc += kappa * t[i] * t[i] * xf * xg;
          }
          return dx * acc;
        };
      },
      "heat2");
  return {std::move(visc), std::move(heat)};
}

StateField1D fluid_rhs_strong(const FluidSystemSpec& spec, const StateField1D& x) {
  const State xs = x;
  field_state(xs, spec.grid, "fluid_rhs_strong");
  const std::size_t n = spec.grid.cells;
  const double dx = spec.grid.dx();
  const double mu = spec.params.mu;
  const double kappa = spec.params.kappa;

  const Vec u = velocity_field(x);
  const Vec t = temperature_field(spec, x);
  const Vec pi = pressure_potential(spec, x);
  Vec mu_flux(n), rho_flux(n), s_flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu_flux[i] = x.m[i] * u[i];
    rho_flux[i] = x.rho[i] * u[i];
    s_flux[i] = x.s[i] * u[i];
  }
  const Vec du = central_difference(u, dx);
  const Vec dt = central_difference(t, dx);
  const Vec dpi = central_difference(pi, dx);
  const Vec d_mu_flux = central_difference(mu_flux, dx);
  const Vec d_rho_flux = central_difference(rho_flux, dx);
  const Vec d_s_flux = central_difference(s_flux, dx);
  Vec visc_stress(n), heat_flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    visc_stress[i] = mu * du[i];
    heat_flux[i] = kappa * dt[i] / t[i];
  }
  const Vec d_visc = central_difference(visc_stress, dx);
  const Vec d_heat = central_difference(heat_flux, dx);

  StateField1D out;
  out.m.resize(n);
  out.rho.resize(n);
  out.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.m[i] = -d_mu_flux[i] - x.m[i] * du[i] - x.rho[i] * dpi[i] - x.s[i] * dt[i] + d_visc[i];
    out.rho[i] = -d_rho_flux[i];
    out.s[i] = -d_s_flux[i] + mu * du[i] * du[i] / t[i] + kappa * dt[i] * dt[i] / (t[i] * t[i]) +
               d_heat[i];
  }
  return out;
}

}  // namespace metriplectic
