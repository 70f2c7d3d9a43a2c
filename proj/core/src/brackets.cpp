#include "metriplectic/brackets.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "metriplectic/error.hpp"

namespace metriplectic {

namespace {

void require_class(const State& x, StateClass cls, const std::string& who) {
  if (state_class(x) != cls) {
    throw Error(ErrorCode::ArityMismatch, who + " is defined on " + std::string(to_string(cls)) +
                                              " states, got " +
                                              std::string(to_string(state_class(x))));
  }
}

const StateSimple& simple_state(const State& x, std::size_t dim, bool with_momentum,
                                const std::string& who) {
  require_class(x, StateClass::Simple, who);
  const auto& s = std::get<StateSimple>(x);
  if (s.q.size() != dim || s.p.size() != (with_momentum ? dim : 0)) {
    throw Error(ErrorCode::DimensionMismatch, who + ": state does not match the system dimension");
  }
  return s;
}

const StateDiscrete& discrete_state(const State& x, const DiscreteSystemSpec& spec,
                                    const std::string& who) {
  require_class(x, StateClass::Discrete, who);
  const auto& s = std::get<StateDiscrete>(x);
  if (s.q.size() != spec.dim || s.p.size() != spec.dim || s.S.size() != spec.entropy_count) {
    throw Error(ErrorCode::DimensionMismatch, who + ": state does not match the system dimension");
  }
  return s;
}

const StateLie& lie_state(const State& x, const LieSystemSpec& spec, const std::string& who) {
  require_class(x, StateClass::Lie, who);
  const auto& s = std::get<StateLie>(x);
  if (s.mu.size() != spec.algebra_dim || s.a.size() != spec.rep_dim) {
    throw Error(ErrorCode::DimensionMismatch,
                who + ": state does not match the structure constants / representation");
  }
  return s;
}

void require_positive_temperature(double t, std::optional<std::size_t> index = std::nullopt) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::NonpositiveTemperature,
                "temperature must be positive, got " + std::to_string(t), index);
  }
}

/// (Λ + Λ^T) / (2T): exactly symmetric, so symmetric_form is bitwise symmetric.
Eigen::MatrixXd scaled_symmetric(const Eigen::MatrixXd& lambda, double t) {
  Eigen::MatrixXd out = (lambda + lambda.transpose()) * (0.5 / t);
  return out;
}

Gradient gradient_checked(const Observable& obs, const State& x, StateClass cls) {
  if (obs.state_class() != cls) {
    throw Error(ErrorCode::ArityMismatch, "observable '" + obs.name() + "' is defined on " +
                                              std::string(to_string(obs.state_class())) +
                                              " states");
  }
  return grad(obs, x);
}

}  // namespace

// ---------------------------------------------------------------------------

Bracket2::Bracket2(Kind kind, StateClass cls, Binder binder, std::string name)
    : kind_(kind), cls_(cls), binder_(std::move(binder)), name_(std::move(name)) {}

Form2 Bracket2::bind(const State& x) const {
  require_class(x, cls_, name_.empty() ? "bracket" : name_);
  return binder_(x);
}

double Bracket2::operator()(const Observable& f, const Observable& g, const State& x) const {
  const Form2 form = bind(x);
  const Gradient gf = gradient_checked(f, x, cls_);
  const Gradient gg = gradient_checked(g, x, cls_);
  return form(gf, gg);
}

Bracket4::Bracket4(StateClass cls, Binder binder, std::string name)
    : cls_(cls), binder_(std::move(binder)), name_(std::move(name)) {}

Form4 Bracket4::bind(const State& x) const {
  require_class(x, cls_, name_.empty() ? "bracket" : name_);
  return binder_(x);
}

double Bracket4::operator()(const Observable& f, const Observable& g, const Observable& m,
                            const Observable& n, const State& x) const {
  const Form4 form = bind(x);
  const Gradient gf = gradient_checked(f, x, cls_);
  const Gradient gg = gradient_checked(g, x, cls_);
  const Gradient gm = gradient_checked(m, x, cls_);
  const Gradient gn = gradient_checked(n, x, cls_);
  return form(gf, gg, gm, gn);
}

SymTensor2Field::SymTensor2Field(StateClass cls, Binder binder, std::string name)
    : cls_(cls), binder_(std::move(binder)), name_(std::move(name)) {}

Form2 SymTensor2Field::bind(const State& x) const {
  require_class(x, cls_, name_.empty() ? "tensor" : name_);
  return binder_(x);
}

double SymTensor2Field::operator()(const Observable& f, const Observable& g, const State& x) const {
  const Form2 form = bind(x);
  return form(gradient_checked(f, x, cls_), gradient_checked(g, x, cls_));
}

// ---------------------------------------------------------------------------

double kn_combine(double a_fm, double a_fn, double a_gm, double a_gn, double b_fm, double b_fn,
                  double b_gm, double b_gn) noexcept {
  const double t1 = a_fm * b_gn + a_gn * b_fm;
  const double t2 = a_fn * b_gm + a_gm * b_fn;
  return t1 - t2;
}

double kn_value(const Form2& a, const Form2& b, const Gradient& f, const Gradient& g,
                const Gradient& m, const Gradient& n) {
  return kn_combine(a(f, m), a(f, n), a(g, m), a(g, n), b(f, m), b(f, n), b(g, m), b(g, n));
}

Bracket4 kn_product(const SymTensor2Field& a, const SymTensor2Field& b, std::string name) {
  if (a.state_class() != b.state_class()) {
    throw Error(ErrorCode::ArityMismatch, "Kulkarni-Nomizu factors live on different state classes");
  }
  return Bracket4(
      a.state_class(),
      [a, b](const State& x) -> Form4 {
        return [fa = a.bind(x), fb = b.bind(x)](const Gradient& f, const Gradient& g,
                                                const Gradient& m, const Gradient& n) {
          return kn_value(fa, fb, f, g, m, n);
        };
      },
      std::move(name));
}

Bracket4 sum(const std::vector<Bracket4>& terms, std::string name) {
  if (terms.empty()) throw Error(ErrorCode::SpecError, "sum of brackets needs at least one term");
  const StateClass cls = terms.front().state_class();
  for (const auto& t : terms) {
    if (t.state_class() != cls) {
      throw Error(ErrorCode::ArityMismatch, "summed brackets live on different state classes");
    }
  }
  return Bracket4(
      cls,
      [terms](const State& x) -> Form4 {
        std::vector<Form4> forms;
        forms.reserve(terms.size());
        for (const auto& t : terms) forms.push_back(t.bind(x));
        return [forms = std::move(forms)](const Gradient& f, const Gradient& g, const Gradient& m,
                                          const Gradient& n) {
          double acc = 0.0;
          for (const auto& form : forms) acc += form(f, g, m, n);
          return acc;
        };
      },
      std::move(name));
}

Bracket2 reduce_to_2(const Bracket4& b4, const Observable& h) {
  const StateClass cls = b4.state_class();
  return Bracket2(
      Bracket2::Kind::Metric, cls,
      [b4, h, cls](const State& x) -> Form2 {
        return [form = b4.bind(x), gh = gradient_checked(h, x, cls)](const Gradient& f,
                                                                     const Gradient& g) {
          return form(f, gh, g, gh);
        };
      },
      "reduced(" + b4.name() + ")");
}

// ---------------------------------------------------------------------------
// Canonical

double canonical_form(const Gradient& f, const Gradient& g) {
  return dot(f.q(), g.p()) - dot(f.p(), g.q());
}

Bracket2 canonical_poisson(StateClass cls) {
  if (cls != StateClass::Simple && cls != StateClass::Discrete) {
    throw Error(ErrorCode::ArityMismatch, "the canonical bracket needs (q, p) coordinates");
  }
  return Bracket2(
      Bracket2::Kind::Symplectic, cls, [](const State&) -> Form2 { return canonical_form; },
      "poisson_canonical");
}

double poisson_canonical(const Observable& f, const Observable& g, const State& x) {
  return canonical_poisson(state_class(x))(f, g, x);
}

// ---------------------------------------------------------------------------
// Simple systems

double checked_temperature(const SimpleSystemSpec& spec, const StateSimple& x) {
  const double t = spec.hamiltonian.partials(x.q, x.p, VecView(&x.S, 1)).dS[0];
  require_positive_temperature(t);
  return t;
}

Bracket4 metric4_first_form(const SimpleSystemSpec& spec, double k_min) {
  return Bracket4(
      StateClass::Simple,
      [spec, k_min](const State& xs) -> Form4 {
        const auto& x = simple_state(xs, spec.dim, true, "metric4_first_form");
        const VecView S(&x.S, 1);
        const HamiltonianPartials hp = spec.hamiltonian.partials(x.q, x.p, S);
        const double t = hp.dS[0];
        require_positive_temperature(t);
        const Eigen::MatrixXd lambda = spec.friction(x.q, hp.dp, S);
        const Vec force = to_vec(-(lambda * as_eigen(hp.dp)));
        const double k = -dot(force, hp.dp);
        if (!(std::abs(k) > k_min)) {
          throw Error(ErrorCode::DegenerateK,
                      "friction power K = " + std::to_string(k) +
                          " is too small for the first-form bracket; use the symmetric form");
        }
        const double scale = 1.0 / (t * k);
        return [force, scale](const Gradient& f, const Gradient& g, const Gradient& m,
                              const Gradient& n) {
          auto x_part = [&force](const Gradient& a, const Gradient& b) {
            return dot(force, a.p()) * b.entropy() - dot(force, b.p()) * a.entropy();
          };
          return scale * (x_part(f, g) * x_part(m, n));
        };
      },
      "metric4_first_form");
}

SymTensor2Field friction_tensor_field(const SimpleSystemSpec& spec) {
  return SymTensor2Field(
      StateClass::Simple,
      [spec](const State& xs) -> Form2 {
        const auto& x = simple_state(xs, spec.dim, true, "friction tensor");
        const VecView S(&x.S, 1);
        const HamiltonianPartials hp = spec.hamiltonian.partials(x.q, x.p, S);
        require_positive_temperature(hp.dS[0]);
        const Eigen::MatrixXd m = scaled_symmetric(spec.friction(x.q, hp.dp, S), hp.dS[0]);
        return [m](const Gradient& f, const Gradient& g) { return symmetric_form(m, f.p(), g.p()); };
      },
      "friction_tensor");
}

SymTensor2Field entropy_tensor_field(StateClass cls) {
  if (cls != StateClass::Simple && cls != StateClass::Lie) {
    throw Error(ErrorCode::ArityMismatch, "the entropy tensor needs a single entropy coordinate");
  }
  return SymTensor2Field(
      cls,
      [](const State&) -> Form2 {
        return [](const Gradient& f, const Gradient& g) { return f.entropy() * g.entropy(); };
      },
      "entropy_tensor");
}

Bracket4 metric4_symmetric_form(const SimpleSystemSpec& spec) {
  return kn_product(friction_tensor_field(spec), entropy_tensor_field(StateClass::Simple),
                    "metric4_symmetric_form");
}

// ---------------------------------------------------------------------------
// Discrete systems

Bracket4 metric4_friction(const DiscreteSystemSpec& spec, std::size_t subsystem) {
  if (subsystem >= spec.entropy_count) {
    throw Error(ErrorCode::DimensionMismatch, "subsystem index out of range", subsystem);
  }
  const std::size_t i = subsystem;
  SymTensor2Field a(
      StateClass::Discrete,
      [spec, i](const State& xs) -> Form2 {
        const auto& x = discrete_state(xs, spec, "metric4_friction");
        const HamiltonianPartials hp = spec.hamiltonian.partials(x.q, x.p, x.S);
        require_positive_temperature(hp.dS[i], i);
        const Eigen::MatrixXd m = scaled_symmetric(spec.frictions[i](x.q, hp.dp, x.S), hp.dS[i]);
        return [m](const Gradient& f, const Gradient& g) { return symmetric_form(m, f.p(), g.p()); };
      },
      "friction_tensor");
  SymTensor2Field b(
      StateClass::Discrete,
      [i](const State&) -> Form2 {
        return [i](const Gradient& f, const Gradient& g) {
          return f.entropies()[i] * g.entropies()[i];
        };
      },
      "entropy_tensor");
  return kn_product(a, b, "metric4_friction_" + std::to_string(i + 1));
}

Bracket4 metric4_transfer(const DiscreteSystemSpec& spec) {
  return Bracket4(
      StateClass::Discrete,
      [spec](const State& xs) -> Form4 {
        const auto& x = discrete_state(xs, spec, "metric4_transfer");
        const Vec t = spec.hamiltonian.partials(x.q, x.p, x.S).dS;
        for (std::size_t i = 0; i < t.size(); ++i) require_positive_temperature(t[i], i);
        const std::size_t n = t.size();
        // Only i < j pairs: the (i,j) and (j,i) summands are equal.
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        Vec coef;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (spec.kappa(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
              pairs.emplace_back(i, j);
              coef.push_back(spec.kappa(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
                             (t[i] * t[j]));
            }
          }
        }
        return [pairs = std::move(pairs), coef = std::move(coef)](
                   const Gradient& f, const Gradient& g, const Gradient& m, const Gradient& nn) {
          const auto fs = f.entropies();
          const auto gs = g.entropies();
          const auto ms = m.entropies();
          const auto ns = nn.entropies();
          double acc = 0.0;
          for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [i, j] = pairs[k];
            const double fg = fs[i] * gs[j] - fs[j] * gs[i];
            const double mn = ms[i] * ns[j] - ms[j] * ns[i];
            acc += coef[k] * (fg * mn);
          }
          return acc;
        };
      },
      "metric4_transfer");
}

Bracket4 metric4_discrete(const DiscreteSystemSpec& spec) {
  std::vector<Bracket4> terms;
  for (std::size_t i = 0; i < spec.entropy_count; ++i) terms.push_back(metric4_friction(spec, i));
  terms.push_back(metric4_transfer(spec));
  return sum(terms, "metric4_discrete");
}

// ---------------------------------------------------------------------------
// Lie systems

Bracket2 lie_poisson(const LieSystemSpec& spec) {
  return Bracket2(
      Bracket2::Kind::Symplectic, StateClass::Lie,
      [spec](const State& xs) -> Form2 {
        const auto& x = lie_state(xs, spec, "lie_poisson");
        const std::size_t n = spec.algebra_dim;
        // M_ij = sum_k mu_k c[k][i][j], so <mu, [u, v]> = u^T M v.
        Eigen::MatrixXd mu_c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              mu_c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                  x.mu[k] * spec.c(k, i, j);
            }
          }
        }
        std::vector<Vec> ra;  // R_i a
        for (std::size_t i = 0; i < n && spec.rep_dim > 0; ++i) {
          ra.push_back(to_vec(spec.representation[i] * as_eigen(x.a)));
        }
        Vec sigma_s(n);
        for (std::size_t i = 0; i < n; ++i) sigma_s[i] = spec.entropy_action[i] * x.s;

        // half of <mu,[g_mu,f_mu]> + <g_a, f_mu . a> + g_s (f_mu . s); the
        // bracket is y(f,g) - y(g,f), antisymmetric bit for bit.
        auto y = [mu_c, ra, sigma_s, n](const Gradient& f, const Gradient& g) {
          const auto fm = f.mu();
          const auto gm = g.mu();
          double comm = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              row += mu_c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * fm[j];
            }
            comm += gm[i] * row;
          }
          double adv = 0.0;
          if (!ra.empty()) {
            const auto ga = g.a();
            for (std::size_t i = 0; i < n; ++i) adv += fm[i] * dot(ga, ra[i]);
          }
          return 0.5 * comm + adv + g.entropy() * dot(fm, sigma_s);
        };
        return [y](const Gradient& f, const Gradient& g) { return y(f, g) - y(g, f); };
      },
      "lie_poisson");
}

Bracket4 metric4_ep(const LieSystemSpec& spec) {
  SymTensor2Field a(
      StateClass::Lie,
      [spec](const State& xs) -> Form2 {
        const auto& x = lie_state(xs, spec, "metric4_ep");
        const double t = lie_hamiltonian_partials(spec, x).ds;
        require_positive_temperature(t);
        const Eigen::MatrixXd m = scaled_symmetric(spec.friction, t);
        return [m](const Gradient& f, const Gradient& g) { return symmetric_form(m, f.mu(), g.mu()); };
      },
      "friction_tensor");
  return kn_product(a, entropy_tensor_field(StateClass::Lie), "metric4_ep");
}

// ---------------------------------------------------------------------------
// Systems without symplectic part

Bracket4 metric4_no_symplectic(const NoSympSystemSpec& spec) {
  SymTensor2Field a(
      StateClass::Simple,
      [spec](const State& xs) -> Form2 {
        const auto& x = simple_state(xs, spec.dim, false, "metric4_no_symplectic");
        const double t = -spec.lagrangian_partials(x.q, x.S).dS;
        require_positive_temperature(t);
        const Eigen::MatrixXd m = scaled_symmetric(spec.friction_inverse, t);
        return [m](const Gradient& f, const Gradient& g) { return symmetric_form(m, f.q(), g.q()); };
      },
      "mobility_tensor");
  return kn_product(a, entropy_tensor_field(StateClass::Simple), "metric4_no_symplectic");
}

}  // namespace metriplectic
