#include "metriplectic/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace metriplectic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class T>
const T& state_as(const State& x, const std::string& who) {
  if (!std::holds_alternative<T>(x)) {
    throw Error(ErrorCode::ArityMismatch,
                who + ": state class " + std::string(to_string(state_class(x))) +
                    " does not match the system");
  }
  return std::get<T>(x);
}

void require_layout(const SystemSpec& spec, const State& x) {
  if (layout_of(x) != system_layout(spec)) {
    throw Error(ErrorCode::DimensionMismatch,
                "state does not match the dimensions of system '" + system_name(spec) + "'");
  }
}

void require_positive(double t, std::optional<std::size_t> index = std::nullopt) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::NonpositiveTemperature,
                "temperature must be positive, got " + std::to_string(t), index);
  }
}

Vec solve_spd(const Eigen::MatrixXd& a, VecView b) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularFrictionMatrix, "friction matrix factorization failed");
  }
  return to_vec(ldlt.solve(as_eigen(b)));
}

}  // namespace

// ---------------------------------------------------------------------------
// System queries

const std::string& system_name(const SystemSpec& spec) {
  return std::visit([](const auto& s) -> const std::string& { return s.name; }, spec);
}

StateClass system_state_class(const SystemSpec& spec) {
  return std::visit(overloaded{
                        [](const SimpleSystemSpec&) { return StateClass::Simple; },
                        [](const DiscreteSystemSpec&) { return StateClass::Discrete; },
                        [](const NoSympSystemSpec&) { return StateClass::Simple; },
                        [](const LieSystemSpec&) { return StateClass::Lie; },
                        [](const FluidSystemSpec&) { return StateClass::Field1D; },
                    },
                    spec);
}

Layout system_layout(const SystemSpec& spec) {
  return std::visit(
      overloaded{
          [](const SimpleSystemSpec& s) { return Layout::simple(s.dim, true); },
          [](const DiscreteSystemSpec& s) { return Layout::discrete(s.dim, s.entropy_count); },
          [](const NoSympSystemSpec& s) { return Layout::simple(s.dim, false); },
          [](const LieSystemSpec& s) { return Layout::lie(s.algebra_dim, s.rep_dim); },
          [](const FluidSystemSpec& s) { return Layout::field(s.grid.cells); },
      },
      spec);
}

Observable hamiltonian_observable(const SystemSpec& spec) {
  const Layout layout = system_layout(spec);
  return std::visit(
      overloaded{
          [&](const SimpleSystemSpec& s) {
            return Observable(
                StateClass::Simple,
                [s, spec](const State& xs) {
                  require_layout(spec, xs);
                  const auto& x = std::get<StateSimple>(xs);
                  return s.hamiltonian.value(x.q, x.p, VecView(&x.S, 1));
                },
                [s, spec, layout](const State& xs) {
                  require_layout(spec, xs);
                  const auto& x = std::get<StateSimple>(xs);
                  const HamiltonianPartials hp = s.hamiltonian.partials(x.q, x.p, VecView(&x.S, 1));
                  Gradient g(layout);
                  std::copy(hp.dq.begin(), hp.dq.end(), g.q().begin());
                  std::copy(hp.dp.begin(), hp.dp.end(), g.p().begin());
                  g.entropy() = hp.dS[0];
                  return g;
                },
                "H");
          },
          [&](const DiscreteSystemSpec& s) {
            return Observable(
                StateClass::Discrete,
                [s, spec](const State& xs) {
                  require_layout(spec, xs);
                  const auto& x = std::get<StateDiscrete>(xs);
                  return s.hamiltonian.value(x.q, x.p, x.S);
                },
                [s, spec, layout](const State& xs) {
                  require_layout(spec, xs);
                  const auto& x = std::get<StateDiscrete>(xs);
                  const HamiltonianPartials hp = s.hamiltonian.partials(x.q, x.p, x.S);
                  Gradient g(layout);
                  std::copy(hp.dq.begin(), hp.dq.end(), g.q().begin());
                  std::copy(hp.dp.begin(), hp.dp.end(), g.p().begin());
                  std::copy(hp.dS.begin(), hp.dS.end(), g.entropies().begin());
                  return g;
                },
                "H");
          },
          [&](const NoSympSystemSpec& s) {
            return Observable(
                StateClass::Simple,
                [s, spec](const State& xs) {
                  require_layout(spec, xs);
                  const auto& x = std::get<StateSimple>(xs);
                  return -s.lagrangian(x.q, x.S);
                },
                [s, spec, layout](const State& xs) {
                  require_layout(spec, xs);
                  const auto& x = std::get<StateSimple>(xs);
                  const NoSympPartials lp = s.lagrangian_partials(x.q, x.S);
                  Gradient g(layout);
                  auto gq = g.q();
                  for (std::size_t i = 0; i < lp.dq.size(); ++i) gq[i] = -lp.dq[i];
                  g.entropy() = -lp.dS;
                  return g;
                },
                "H");
          },
          [&](const LieSystemSpec& s) {
            return Observable(
                StateClass::Lie,
                [s, spec](const State& xs) {
                  require_layout(spec, xs);
                  return lie_hamiltonian(s, std::get<StateLie>(xs));
                },
                [s, spec, layout](const State& xs) {
                  require_layout(spec, xs);
                  const LieHamiltonianPartials hp = lie_hamiltonian_partials(s, std::get<StateLie>(xs));
                  Gradient g(layout);
                  std::copy(hp.dmu.begin(), hp.dmu.end(), g.mu().begin());
                  std::copy(hp.da.begin(), hp.da.end(), g.a().begin());
                  g.entropy() = hp.ds;
                  return g;
                },
                "H");
          },
          [&](const FluidSystemSpec& s) { return fluid_hamiltonian(s); },
      },
      spec);
}

Observable entropy_observable(const SystemSpec& spec) {
  if (const auto* fluid = std::get_if<FluidSystemSpec>(&spec)) return total_entropy(fluid->grid);
  const Layout layout = system_layout(spec);
  const StateClass cls = system_state_class(spec);
  const std::size_t first = layout.offset(2);
  const std::size_t count = layout.blocks[2];
  return Observable(
      cls,
      [spec, first, count](const State& xs) {
        require_layout(spec, xs);
        const Vec flat = flatten(xs);
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) acc += flat[first + i];
        return acc;
      },
      [spec, layout, first, count](const State& xs) {
        require_layout(spec, xs);
        Gradient g(layout);
        for (std::size_t i = 0; i < count; ++i) g[first + i] = 1.0;
        return g;
      },
      "S_total");
}

State sample_state(const SystemSpec& spec, SplitMix64& rng) {
  return std::visit(
      overloaded{
          [&](const SimpleSystemSpec& s) -> State { return s.sampler(rng); },
          [&](const DiscreteSystemSpec& s) -> State { return s.sampler(rng); },
          [&](const NoSympSystemSpec& s) -> State { return s.sampler(rng); },
          [&](const LieSystemSpec& s) -> State { return s.sampler(rng); },
          [&](const FluidSystemSpec& s) -> State {
            // Smooth random profile: a few low Fourier modes around a base state.
            const std::size_t n = s.grid.cells;
            StateField1D x;
            x.m.resize(n);
            x.rho.resize(n);
            x.s.resize(n);
            constexpr double kTwoPi = 6.283185307179586;
            double amp[3][2][2];
            for (auto& block : amp) {
              for (auto& mode : block) {
                mode[0] = rng.uniform(-1.0, 1.0);
                mode[1] = rng.uniform(-1.0, 1.0);
              }
            }
            const double m0 = rng.uniform(-0.5, 0.5);
            const double s0 = rng.uniform(-0.2, 0.2);
            for (std::size_t i = 0; i < n; ++i) {
              const double phase = kTwoPi * s.grid.center(i) / s.grid.length;
              double wave[3] = {0.0, 0.0, 0.0};
              for (std::size_t b = 0; b < 3; ++b) {
                for (std::size_t k = 0; k < 2; ++k) {
                  const double kk = static_cast<double>(k + 1);
                  wave[b] += amp[b][k][0] * std::cos(kk * phase) + amp[b][k][1] * std::sin(kk * phase);
                }
              }
              x.m[i] = m0 + 0.3 * wave[0];
              x.rho[i] = 1.0 + 0.2 * wave[1];
              x.s[i] = s0 + 0.2 * wave[2];
            }
            return x;
          },
      },
      spec);
}

bool is_admissible(const SystemSpec& spec, const State& x) {
  try {
    validate(x);
    if (layout_of(x) != system_layout(spec)) return false;
  } catch (const Error&) {
    return false;
  }
  return std::visit(
      overloaded{
          [&](const SimpleSystemSpec& s) { return s.admissible(std::get<StateSimple>(x)); },
          [&](const DiscreteSystemSpec& s) { return s.admissible(std::get<StateDiscrete>(x)); },
          [&](const NoSympSystemSpec& s) { return s.admissible(std::get<StateSimple>(x)); },
          [&](const LieSystemSpec& s) { return s.admissible(std::get<StateLie>(x)); },
          [&](const FluidSystemSpec&) {
            for (double r : std::get<StateField1D>(x).rho) {
              if (!(r > 0.0)) return false;
            }
            return true;
          },
      },
      spec);
}

Vec temperatures(const SystemSpec& spec, const State& x) {
  require_layout(spec, x);
  return std::visit(
      overloaded{
          [&](const SimpleSystemSpec& s) {
            const auto& xs = std::get<StateSimple>(x);
            return s.hamiltonian.partials(xs.q, xs.p, VecView(&xs.S, 1)).dS;
          },
          [&](const DiscreteSystemSpec& s) {
            const auto& xs = std::get<StateDiscrete>(x);
            return s.hamiltonian.partials(xs.q, xs.p, xs.S).dS;
          },
          [&](const NoSympSystemSpec& s) {
            const auto& xs = std::get<StateSimple>(x);
            return Vec{-s.lagrangian_partials(xs.q, xs.S).dS};
          },
          [&](const LieSystemSpec& s) {
            return Vec{lie_hamiltonian_partials(s, std::get<StateLie>(x)).ds};
          },
          [&](const FluidSystemSpec& s) { return temperature_field(s, std::get<StateField1D>(x)); },
      },
      spec);
}

std::optional<double> friction_power(const SystemSpec& spec, const State& x) {
  const auto* simple = std::get_if<SimpleSystemSpec>(&spec);
  if (simple == nullptr) return std::nullopt;
  return dissipated_power(*simple, state_as<StateSimple>(x, "friction_power"));
}

std::string_view to_string(EngineKind kind) noexcept {
  return kind == EngineKind::Bracket ? "bracket" : "euler_lagrange";
}

std::string_view to_string(BracketForm form) noexcept {
  return form == BracketForm::First ? "first" : "symmetric";
}

std::string_view to_string(Method method) noexcept {
  return method == Method::Euler ? "euler" : "rk4";
}

// ---------------------------------------------------------------------------
// Euler-Lagrange engine

namespace {

State el_simple(const SimpleSystemSpec& s, const StateSimple& x) {
  const VecView S(&x.S, 1);
  const HamiltonianPartials hp = s.hamiltonian.partials(x.q, x.p, S);
  const double t = hp.dS[0];
  require_positive(t);
  const Vec& qdot = hp.dp;
  const Eigen::MatrixXd lambda = s.friction(x.q, qdot, S);
  const Vec force = to_vec(-(lambda * as_eigen(qdot)));
  StateSimple out;
  out.q = qdot;
  out.p.resize(qdot.size());
  for (std::size_t i = 0; i < qdot.size(); ++i) out.p[i] = -hp.dq[i] + force[i];
  // (dL/dS) S' = <F^fr, q'> with dL/dS = -T.
  out.S = dot(force, qdot) / (-t);
  return out;
}

State el_discrete(const DiscreteSystemSpec& s, const StateDiscrete& x) {
  const HamiltonianPartials hp = s.hamiltonian.partials(x.q, x.p, x.S);
  const std::size_t n = s.entropy_count;
  for (std::size_t i = 0; i < n; ++i) require_positive(hp.dS[i], i);
  const Vec& qdot = hp.dp;
  const Eigen::MatrixXd j = heat_flux_matrix(s);
  StateDiscrete out;
  out.q = qdot;
  out.p.resize(qdot.size());
  for (std::size_t k = 0; k < qdot.size(); ++k) out.p[k] = -hp.dq[k];
  out.S.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXd lambda = s.frictions[i](x.q, qdot, x.S);
    const Vec force = to_vec(-(lambda * as_eigen(qdot)));
    for (std::size_t k = 0; k < qdot.size(); ++k) out.p[k] += force[k];
    // (dL/dS_i) S_i' = <F_i, q'> - sum_j J_ij dL/dS_j, with dL/dS = -T.
    double heat = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      heat += j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * hp.dS[k];
    }
    out.S[i] = (dot(force, qdot) + heat) / (-hp.dS[i]);
  }
  return out;
}

State el_no_symplectic(const NoSympSystemSpec& s, const StateSimple& x) {
  const NoSympPartials lp = s.lagrangian_partials(x.q, x.S);
  const double t = -lp.dS;
  require_positive(t);
  // Λ q' = dL/dq, and (dL/dS) S' = -q'^T Λ q'.
  StateSimple out;
  out.q = solve_spd(s.friction, lp.dq);
  const double power = as_eigen(out.q).dot(s.friction * as_eigen(out.q));
  out.S = power / t;
  return out;
}

State el_lie(const LieSystemSpec& s, const StateLie& x) {
  const std::size_t n = s.algebra_dim;
  const Vec xi = s.inverse_legendre(x.mu, x.a, x.s);
  const LiePartials lp = s.lagrangian_partials(xi, x.a, x.s);
  const double t = -lp.ds;
  require_positive(t);
  const Eigen::VectorXd friction = s.friction * as_eigen(xi);
  StateLie out;
  out.mu.resize(n);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec comm = commutator(s, xi, e);
    double v = dot(x.mu, comm);
    if (s.rep_dim > 0) v -= dot(lp.da, act_on_parameter(s, e, x.a));
    v -= lp.ds * act_on_entropy(s, e, x.s);
    v -= friction(static_cast<Eigen::Index>(j));
    out.mu[j] = v;
    e[j] = 0.0;
  }
  const Vec xa = act_on_parameter(s, xi, x.a);
  out.a.resize(xa.size());
  for (std::size_t k = 0; k < xa.size(); ++k) out.a[k] = -xa[k];
  out.s = -act_on_entropy(s, xi, x.s) + as_eigen(xi).dot(friction) / t;
  return out;
}

}  // namespace

State rhs_euler_lagrange(const SystemSpec& spec, const State& x) {
  require_layout(spec, x);
  return std::visit(
      overloaded{
          [&](const SimpleSystemSpec& s) { return el_simple(s, std::get<StateSimple>(x)); },
          [&](const DiscreteSystemSpec& s) { return el_discrete(s, std::get<StateDiscrete>(x)); },
          [&](const NoSympSystemSpec& s) { return el_no_symplectic(s, std::get<StateSimple>(x)); },
          [&](const LieSystemSpec& s) { return el_lie(s, std::get<StateLie>(x)); },
          [&](const FluidSystemSpec& s) -> State {
            return fluid_rhs_strong(s, std::get<StateField1D>(x));
          },
      },
      spec);
}

// ---------------------------------------------------------------------------
// Bracket engine

std::optional<Bracket2> system_poisson(const SystemSpec& spec) {
  return std::visit(
      overloaded{
          [](const SimpleSystemSpec&) -> std::optional<Bracket2> {
            return canonical_poisson(StateClass::Simple);
          },
          [](const DiscreteSystemSpec&) -> std::optional<Bracket2> {
            return canonical_poisson(StateClass::Discrete);
          },
          [](const NoSympSystemSpec&) -> std::optional<Bracket2> { return std::nullopt; },
          [](const LieSystemSpec& s) -> std::optional<Bracket2> { return lie_poisson(s); },
          [](const FluidSystemSpec& s) -> std::optional<Bracket2> { return lie_poisson_fluid(s); },
      },
      spec);
}

Bracket4 system_metric(const SystemSpec& spec, EngineOptions options) {
  return std::visit(
      overloaded{
          [&](const SimpleSystemSpec& s) {
            return options.bracket_form == BracketForm::First ? metric4_first_form(s, options.k_min)
                                                              : metric4_symmetric_form(s);
          },
          [](const DiscreteSystemSpec& s) { return metric4_discrete(s); },
          [](const NoSympSystemSpec& s) { return metric4_no_symplectic(s); },
          [](const LieSystemSpec& s) { return metric4_ep(s); },
          [](const FluidSystemSpec& s) {
            return sum({visc_bracket4(s), heat_bracket4(s)}, "fluid_dissipation");
          },
      },
      spec);
}

BracketEngine::BracketEngine(SystemSpec spec, EngineOptions options)
    : spec_(std::move(spec)),
      poisson_(system_poisson(spec_)),
      metric_(system_metric(spec_, options)),
      hamiltonian_(options.fd_hamiltonian ? hamiltonian_observable(spec_).without_gradient()
                                          : hamiltonian_observable(spec_)),
      entropy_(entropy_observable(spec_)) {}

State BracketEngine::rhs(const State& x) const {
  require_layout(spec_, x);
  const Layout layout = layout_of(x);
  const Form4 metric = metric_.bind(x);
  const std::optional<Form2> poisson =
      poisson_ ? std::optional<Form2>(poisson_->bind(x)) : std::nullopt;
  const Gradient gh = grad(hamiltonian_, x);
  const Gradient gs = grad(entropy_, x);

  Vec tangent(layout.size(), 0.0);
  Gradient e(layout);
  for (std::size_t j = 0; j < layout.size(); ++j) {
    e[j] = 1.0;
    double v = metric(e, gh, gs, gh);
    if (poisson) v += (*poisson)(e, gh);
    tangent[j] = v;
    e[j] = 0.0;
  }
  return unflatten(layout, tangent);
}

State rhs_bracket(const SystemSpec& spec, const State& x, EngineOptions options) {
  return BracketEngine(spec, options).rhs(x);
}

// ---------------------------------------------------------------------------
// Integration

void Trajectory::throw_if_aborted() const {
  if (aborted) throw *aborted;
}

StepDiagnostics diagnose(const SystemSpec& spec, const State& x, const State& rate) {
  StepDiagnostics d;
  d.H = eval(hamiltonian_observable(spec), x);
  const Observable entropy = entropy_observable(spec);
  d.S_total = eval(entropy, x);
  // S_total is linear, so its rate is the same functional applied to the tangent.
  d.dSdt = eval(entropy, rate);
  d.T = temperatures(spec, x);
  d.K = friction_power(spec, x);
  return d;
}

Trajectory integrate(const SystemSpec& spec, const State& x0, const IntegratorOptions& options) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) {
    throw Error(ErrorCode::ConfigError, "dt must be positive");
  }
  if (!(options.t_final >= 0.0) || !std::isfinite(options.t_final)) {
    throw Error(ErrorCode::ConfigError, "t_final must be nonnegative");
  }
  if (!is_admissible(spec, x0)) {
    throw Error(ErrorCode::DomainViolation, "initial state is outside the admissible domain", 0);
  }

  const Layout layout = system_layout(spec);
  std::optional<BracketEngine> engine;
  if (options.engine == EngineKind::Bracket) engine.emplace(spec, options.engine_options);
  const Observable hamiltonian = hamiltonian_observable(spec);
  const Observable entropy = entropy_observable(spec);

  auto f = [&](const Vec& v) -> Vec {
    const State x = unflatten(layout, v);
    return flatten(engine ? engine->rhs(x) : rhs_euler_lagrange(spec, x));
  };
  auto record = [&](Trajectory& traj, double t, const Vec& v, const Vec& rate) {
    const State x = unflatten(layout, v);
    StepDiagnostics d;
    d.H = eval(hamiltonian, x);
    d.S_total = eval(entropy, x);
    d.dSdt = eval(entropy, unflatten(layout, rate));
    d.T = temperatures(spec, x);
    d.K = friction_power(spec, x);
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.diagnostics.push_back(std::move(d));
  };

  const auto n_steps = static_cast<std::size_t>(std::llround(options.t_final / options.dt));
  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.diagnostics.reserve(n_steps + 1);

  Vec x = flatten(x0);
  Vec k1 = f(x);
  record(traj, 0.0, x, k1);
  const double dt = options.dt;
  const std::size_t n = x.size();
  Vec stage(n), next(n);

  for (std::size_t step = 1; step <= n_steps; ++step) {
    try {
      if (options.method == Method::Euler) {
        for (std::size_t i = 0; i < n; ++i) next[i] = x[i] + dt * k1[i];
      } else {
        for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k1[i];
        const Vec k2 = f(stage);
        for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k2[i];
        const Vec k3 = f(stage);
        for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + dt * k3[i];
        const Vec k4 = f(stage);
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
      }
      if (!is_admissible(spec, unflatten(layout, next))) {
        throw Error(ErrorCode::DomainViolation, "step left the admissible domain");
      }
      k1 = f(next);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::DomainViolation &&
          err.code() != ErrorCode::NonpositiveTemperature) {
        throw;
      }
      traj.aborted = Error(err.code(), "step " + std::to_string(step) + ": " + err.message(), step);
      return traj;
    }
    x.swap(next);
    record(traj, static_cast<double>(step) * dt, x, k1);
  }
  return traj;
}

}  // namespace metriplectic
