#include "metriplectic/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <thread>
#include <utility>

#include <json.hpp>

#include "metriplectic/brackets.hpp"
#include "metriplectic/error.hpp"
#include "metriplectic/fluid1d.hpp"
#include "metriplectic/random.hpp"

namespace metriplectic {

namespace {

using Maxima = std::map<std::string, double>;

void bump(Maxima& m, const std::string& key, double v) {
  if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
  auto [it, inserted] = m.emplace(key, v);
  if (!inserted) it->second = std::max(it->second, v);
}

void merge(Maxima& into, const Maxima& from) {
  for (const auto& [k, v] : from) bump(into, k, v);
}

/// Runs work(i, maxima) for i in [0, count), sharded over `jobs` threads.
/// The max-reduction does not depend on the sharding.
template <class Work>
Maxima sharded(std::size_t count, std::size_t jobs, Work work) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  std::vector<Maxima> partial(jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) work(i, partial[0]);
    return partial[0];
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += jobs) work(i, partial[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Maxima out;
  for (const auto& p : partial) merge(out, p);
  return out;
}

double inf_norm(VecView v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<State> sample_states(const SystemSpec& spec, SplitMix64& rng, std::size_t count) {
  std::vector<State> states;
  states.reserve(count);
  for (std::size_t i = 0; i < count; ++i) states.push_back(sample_state(spec, rng));
  return states;
}

// ---------------------------------------------------------------------------
// Random polynomials

struct Term {
  double coef = 0.0;
  std::vector<std::size_t> vars;  // multiset, sorted
};

std::size_t monomial_count(std::size_t nv, unsigned degree, std::size_t cap) {
  // sum_d C(nv + d - 1, d), stopping once it exceeds cap.
  std::size_t total = 0;
  double c = 1.0;
  for (unsigned d = 0; d <= degree; ++d) {
    if (d > 0) c = c * static_cast<double>(nv + d - 1) / static_cast<double>(d);
    total += static_cast<std::size_t>(std::llround(c));
    if (total > cap) return total;
  }
  return total;
}

void enumerate(std::size_t nv, unsigned degree, std::size_t start, std::vector<std::size_t>& prefix,
               std::vector<std::vector<std::size_t>>& out) {
  if (prefix.size() == degree) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t v = start; v < nv; ++v) {
    prefix.push_back(v);
    enumerate(nv, degree, v, prefix, out);
    prefix.pop_back();
  }
}

class Polynomial {
 public:
  Polynomial(Layout layout, std::vector<Term> terms) : layout_(layout), terms_(std::move(terms)) {}

  [[nodiscard]] double value(const State& x) const {
    const Vec v = checked(x);
    double acc = 0.0;
    for (const auto& t : terms_) {
      double prod = t.coef;
      for (std::size_t k : t.vars) prod *= v[k];
      acc += prod;
    }
    return acc;
  }

  [[nodiscard]] Gradient gradient(const State& x) const {
    const Vec v = checked(x);
    Gradient g(layout_);
    for (const auto& t : terms_) {
      for (std::size_t skip = 0; skip < t.vars.size(); ++skip) {
        double prod = t.coef;
        for (std::size_t k = 0; k < t.vars.size(); ++k) {
          if (k != skip) prod *= v[t.vars[k]];
        }
        g[t.vars[skip]] += prod;
      }
    }
    return g;
  }

 private:
  [[nodiscard]] Vec checked(const State& x) const {
    if (layout_of(x) != layout_) {
      throw Error(ErrorCode::DimensionMismatch, "random observable evaluated on a foreign layout");
    }
    return flatten(x);
  }

  Layout layout_;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Symmetry suite

struct Quad {
  Observable f, g, m, n;
};

void check_4_symmetries(const std::string& name, const Form4& b, const Gradient& f,
                        const Gradient& g, const Gradient& m, const Gradient& n, Maxima& out) {
  const double v = b(f, g, m, n);
  bump(out, name + ".antisymmetry_first_pair", relative_violation(v, -b(g, f, m, n)));
  bump(out, name + ".antisymmetry_second_pair", relative_violation(v, -b(f, g, n, m)));
  bump(out, name + ".pair_exchange", relative_violation(v, b(m, n, f, g)));
}

struct NamedForm4 {
  std::string name;
  Form4 form;
};

/// The 4-brackets of a system bound at x; forms that cannot be bound at x
/// (first form with small K) are skipped.
std::vector<NamedForm4> bound_metric_brackets(const SystemSpec& spec, const State& x) {
  std::vector<NamedForm4> out;
  if (const auto* s = std::get_if<SimpleSystemSpec>(&spec)) {
    out.push_back({"symmetric_form", metric4_symmetric_form(*s).bind(x)});
    const std::optional<double> k = friction_power(spec, x);
    if (k && std::abs(*k) > Tolerances::first_form_k_floor) {
      out.push_back({"first_form", metric4_first_form(*s).bind(x)});
    }
  } else if (const auto* d = std::get_if<DiscreteSystemSpec>(&spec)) {
    for (std::size_t i = 0; i < d->entropy_count; ++i) {
      out.push_back({"friction_" + std::to_string(i + 1), metric4_friction(*d, i).bind(x)});
    }
    out.push_back({"transfer", metric4_transfer(*d).bind(x)});
  } else if (const auto* ns = std::get_if<NoSympSystemSpec>(&spec)) {
    out.push_back({"no_symplectic", metric4_no_symplectic(*ns).bind(x)});
  } else if (const auto* l = std::get_if<LieSystemSpec>(&spec)) {
    out.push_back({"euler_poincare", metric4_ep(*l).bind(x)});
  } else if (const auto* fl = std::get_if<FluidSystemSpec>(&spec)) {
    out.push_back({"visc", visc_bracket4(*fl).bind(x)});
    out.push_back({"heat", heat_bracket4(*fl).bind(x)});
  }
  return out;
}

VerifyReport symmetry_suite(const SystemSpec& spec, std::uint64_t seed, std::size_t n_cases,
                            const SuiteOptions& options, VerifyReport report) {
  SplitMix64 rng(seed);
  const Layout layout = system_layout(spec);
  const std::vector<State> states = sample_states(spec, rng, Tolerances::states_per_case);
  std::vector<Quad> quads;
  quads.reserve(n_cases);
  auto make = [&](std::uint64_t s) {
    Observable o = random_observable(s, layout, Tolerances::observable_degree);
    return options.use_fd ? o.without_gradient() : o;
  };
  for (std::size_t c = 0; c < n_cases; ++c) {
    const std::uint64_t s1 = rng.next();
    const std::uint64_t s2 = rng.next();
    const std::uint64_t s3 = rng.next();
    const std::uint64_t s4 = rng.next();
    quads.push_back({make(s1), make(s2), make(s3), make(s4)});
  }
  const Observable h = hamiltonian_observable(spec);
  const Observable entropy = entropy_observable(spec);
  const std::optional<Bracket2> poisson = system_poisson(spec);
  const Bracket4 metric = system_metric(spec);
  const Bracket2 reduced = reduce_to_2(metric, h);
  const auto* fluid = std::get_if<FluidSystemSpec>(&spec);
  const auto* discrete = std::get_if<DiscreteSystemSpec>(&spec);

  report.violations = sharded(states.size(), options.jobs, [&](std::size_t si, Maxima& out) {
    const State& x = states[si];
    const std::vector<NamedForm4> forms = bound_metric_brackets(spec, x);
    const std::optional<Form2> pform = poisson ? std::optional<Form2>(poisson->bind(x)) : std::nullopt;
    const Form2 rform = reduced.bind(x);
    const Gradient gh = grad(h, x);
    const Gradient gs = grad(entropy, x);
    std::optional<Form2> visc2, heat2, visc_r, heat_r;
    if (fluid != nullptr) {
      const ReducedFluidBrackets closed = reduced_2brackets(*fluid);
      visc2 = closed.visc.bind(x);
      heat2 = closed.heat.bind(x);
      visc_r = reduce_to_2(visc_bracket4(*fluid), h).bind(x);
      heat_r = reduce_to_2(heat_bracket4(*fluid), h).bind(x);
    }
    for (const auto& q : quads) {
      const Gradient f = grad(q.f, x);
      const Gradient g = grad(q.g, x);
      const Gradient m = grad(q.m, x);
      const Gradient n = grad(q.n, x);
      for (const auto& nf : forms) check_4_symmetries(nf.name, nf.form, f, g, m, n, out);
      if (pform) {
        bump(out, "poisson.antisymmetry", relative_violation((*pform)(f, g), -(*pform)(g, f)));
        if (fluid == nullptr && system_state_class(spec) != StateClass::Lie) {
          bump(out, "poisson.entropy_casimir", std::abs((*pform)(f, gs)));
        }
      }
      bump(out, "reduced.symmetry", relative_violation(rform(f, g), rform(g, f)));
      if (fluid != nullptr) {
        bump(out, "reduction.visc", std::abs((*visc2)(f, g) - (*visc_r)(f, g)) /
                                        std::max({std::abs((*visc2)(f, g)), std::abs((*visc_r)(f, g)), 1.0}));
        bump(out, "reduction.heat", std::abs((*heat2)(f, g) - (*heat_r)(f, g)) /
                                        std::max({std::abs((*heat2)(f, g)), std::abs((*heat_r)(f, g)), 1.0}));
      }
    }
    if (discrete != nullptr) {
      const Form4 tr = metric4_transfer(*discrete).bind(x);
      bump(out, "transfer.negative_entropy_production", std::max(0.0, -tr(gs, gh, gs, gh)));
    }
  });

  const double tol = options.use_fd ? Tolerances::symmetry_fd : Tolerances::symmetry;
  for (const auto& [key, value] : report.violations) {
    (void)value;
    if (key.starts_with("reduction.")) {
      report.thresholds[key] = Tolerances::reduction;
    } else if (key == "transfer.negative_entropy_production") {
      report.thresholds[key] = Tolerances::entropy_rate;
    } else {
      report.thresholds[key] = tol;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Equivalence suite

VerifyReport equivalence_suite(const SystemSpec& spec, std::uint64_t seed, std::size_t n_cases,
                               const SuiteOptions& options, VerifyReport report) {
  SplitMix64 rng(seed);
  const std::vector<State> states = sample_states(spec, rng, n_cases);
  EngineOptions eo;
  eo.fd_hamiltonian = options.use_fd;
  const BracketEngine engine(spec, eo);
  std::optional<BracketEngine> first;
  if (std::holds_alternative<SimpleSystemSpec>(spec)) {
    EngineOptions fo = eo;
    fo.bracket_form = BracketForm::First;
    first.emplace(spec, fo);
  }
  report.violations = sharded(states.size(), options.jobs, [&](std::size_t i, Maxima& out) {
    const State& x = states[i];
    const Vec el = flatten(rhs_euler_lagrange(spec, x));
    const Vec br = flatten(engine.rhs(x));
    double diff = 0.0;
    for (std::size_t k = 0; k < el.size(); ++k) diff = std::max(diff, std::abs(br[k] - el[k]));
    bump(out, "rhs_bracket_vs_euler_lagrange", diff / (1.0 + inf_norm(el)));
    if (first) {
      const std::optional<double> k = friction_power(spec, x);
      if (k && std::abs(*k) > Tolerances::first_form_k_floor) {
        const Vec fr = flatten(first->rhs(x));
        double d2 = 0.0;
        for (std::size_t c = 0; c < fr.size(); ++c) d2 = std::max(d2, std::abs(fr[c] - br[c]));
        bump(out, "first_vs_symmetric_form", d2 / (1.0 + inf_norm(br)));
      }
    }
  });
  double tol = Tolerances::equivalence;
  if (std::holds_alternative<FluidSystemSpec>(spec)) tol = Tolerances::equivalence_fluid;
  if (options.use_fd) tol = Tolerances::equivalence_fd;
  report.thresholds["rhs_bracket_vs_euler_lagrange"] = tol;
  if (report.violations.contains("first_vs_symmetric_form")) {
    report.thresholds["first_vs_symmetric_form"] =
        options.use_fd ? Tolerances::equivalence_fd : Tolerances::first_vs_symmetric;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Conservation suite

VerifyReport conservation_suite(const SystemSpec& spec, std::uint64_t seed, std::size_t n_cases,
                                const SuiteOptions& options, VerifyReport report) {
  SplitMix64 rng(seed);
  const std::vector<State> states = sample_states(spec, rng, n_cases);
  const BracketEngine engine(spec);
  const Observable h = hamiltonian_observable(spec);
  const Observable entropy = entropy_observable(spec);
  const auto* fluid = std::get_if<FluidSystemSpec>(&spec);
  constexpr std::size_t kRuns = 3;
  constexpr std::size_t kRunSteps = 100;
  constexpr double kRunDt = 1e-3;

  report.violations = sharded(states.size(), options.jobs, [&](std::size_t i, Maxima& out) {
    const State& x = states[i];
    const Gradient gh = grad(h, x);
    for (const State& rate : {engine.rhs(x), rhs_euler_lagrange(spec, x)}) {
      const Vec r = flatten(rate);
      double acc = 0.0;
      double scale = 0.0;
      for (std::size_t k = 0; k < r.size(); ++k) {
        acc += gh[k] * r[k];
        scale += std::abs(gh[k] * r[k]);
      }
      bump(out, "energy_rate", scale > 0.0 ? std::abs(acc) / scale : 0.0);
      bump(out, "entropy_rate_negativity", std::max(0.0, -eval(entropy, rate)));
    }
    if (i >= kRuns) return;
    IntegratorOptions io;
    io.dt = kRunDt;
    io.t_final = kRunDt * static_cast<double>(kRunSteps);
    const Trajectory traj = integrate(spec, x, io);
    bump(out, "run.aborted", traj.aborted ? 1.0 : 0.0);
    const double h0 = traj.diagnostics.front().H;
    std::optional<Observable> mass;
    if (fluid != nullptr) mass = total_mass(fluid->grid);
    const double m0 = mass ? eval(*mass, traj.states.front()) : 0.0;
    double m_prev = m0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const auto& d = traj.diagnostics[k];
      const auto& prev = traj.diagnostics[k - 1];
      bump(out, "run.entropy_step_negativity", std::max(0.0, prev.S_total - d.S_total));
      bump(out, "run.energy_drift", std::abs(d.H - h0) / std::max(std::abs(h0), 1e-300));
      if (mass) {
        const double mk = eval(*mass, traj.states[k]);
        bump(out, "run.mass_step", std::abs(mk - m_prev) / std::abs(m0));
        m_prev = mk;
      }
    }
  });
  report.thresholds["energy_rate"] = Tolerances::energy_rate;
  report.thresholds["entropy_rate_negativity"] = Tolerances::entropy_rate;
  report.thresholds["run.aborted"] = 0.0;
  report.thresholds["run.entropy_step_negativity"] = Tolerances::entropy_rate;
  report.thresholds["run.energy_drift"] = Tolerances::energy_drift_run;
  if (fluid != nullptr) report.thresholds["run.mass_step"] = Tolerances::mass_per_step;
  return report;
}

// ---------------------------------------------------------------------------
// Jacobi suite

VerifyReport jacobi_suite(const SystemSpec& spec, std::uint64_t seed, std::size_t n_cases,
                          const SuiteOptions& options, VerifyReport report) {
  const std::optional<Bracket2> poisson = system_poisson(spec);
  if (!poisson || std::holds_alternative<FluidSystemSpec>(spec)) {
    throw Error(ErrorCode::UnsupportedSuite,
                "jacobi suite needs a finite-dimensional Poisson bracket; system '" +
                    system_name(spec) + "' has none");
  }
  SplitMix64 rng(seed);
  const Layout layout = system_layout(spec);
  const std::vector<State> states = sample_states(spec, rng, Tolerances::states_per_case);
  std::vector<std::array<Observable, 3>> triples;
  for (std::size_t c = 0; c < n_cases; ++c) {
    const std::uint64_t a = rng.next();
    const std::uint64_t b = rng.next();
    const std::uint64_t d = rng.next();
    triples.push_back({random_observable(a, layout, Tolerances::jacobi_degree),
                       random_observable(b, layout, Tolerances::jacobi_degree),
                       random_observable(d, layout, Tolerances::jacobi_degree)});
  }
  report.violations = sharded(n_cases, options.jobs, [&](std::size_t c, Maxima& out) {
    const auto& t = triples[c];
    bump(out, "jacobi_cyclic_sum",
         std::abs(jacobi_cyclic_sum(*poisson, t[0], t[1], t[2], states[c % states.size()])));
  });
  report.thresholds["jacobi_cyclic_sum"] = Tolerances::jacobi;
  return report;
}

// ---------------------------------------------------------------------------
// KN agreement suite

/// Direct expansion with a(F,G) = <F_x, W G_x> read from `slot`, b = F_e G_e
/// read from `ent`; W is used as given (not symmetrized).
template <class Slot, class Ent>
DirectValue direct_expansion(const Eigen::MatrixXd& w, Slot slot, Ent ent, const Gradient& f,
                             const Gradient& g, const Gradient& m, const Gradient& n) {
  auto a = [&](const Gradient& x, const Gradient& y) {
    return as_eigen(slot(x)).dot(w * as_eigen(slot(y)));
  };
  const double t1 = a(n, g) * ent(f) * ent(m);
  const double t2 = a(n, f) * ent(g) * ent(m);
  const double t3 = a(m, f) * ent(g) * ent(n);
  const double t4 = a(m, g) * ent(f) * ent(n);
  return {t1 - t2 + t3 - t4, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)};
}

VerifyReport kn_suite(const SystemSpec& spec, std::uint64_t seed, std::size_t n_cases,
                      const SuiteOptions& options, VerifyReport report) {
  const bool supported = std::holds_alternative<SimpleSystemSpec>(spec) ||
                         std::holds_alternative<NoSympSystemSpec>(spec) ||
                         std::holds_alternative<LieSystemSpec>(spec);
  if (!supported) {
    throw Error(ErrorCode::UnsupportedSuite,
                "kn_agreement suite covers single-entropy systems only, not '" + system_name(spec) + "'");
  }
  SplitMix64 rng(seed);
  const Layout layout = system_layout(spec);
  const std::vector<State> states = sample_states(spec, rng, Tolerances::states_per_case);
  std::vector<Quad> quads;
  for (std::size_t c = 0; c < n_cases; ++c) {
    const std::uint64_t s1 = rng.next();
    const std::uint64_t s2 = rng.next();
    const std::uint64_t s3 = rng.next();
    const std::uint64_t s4 = rng.next();
    quads.push_back({random_observable(s1, layout, Tolerances::observable_degree),
                     random_observable(s2, layout, Tolerances::observable_degree),
                     random_observable(s3, layout, Tolerances::observable_degree),
                     random_observable(s4, layout, Tolerances::observable_degree)});
  }
  const Bracket4 kn = system_metric(spec);
  report.violations = sharded(n_cases, options.jobs, [&](std::size_t c, Maxima& out) {
    const State& x = states[c % states.size()];
    const auto& q = quads[c];
    const Gradient f = grad(q.f, x);
    const Gradient g = grad(q.g, x);
    const Gradient m = grad(q.m, x);
    const Gradient n = grad(q.n, x);
    const double value = kn.bind(x)(f, g, m, n);
    const double t = temperatures(spec, x)[0];
    auto ent = [](const Gradient& y) { return y.entropy(); };
    DirectValue direct;
    if (const auto* s = std::get_if<SimpleSystemSpec>(&spec)) {
      const auto& xs = std::get<StateSimple>(x);
      const VecView S(&xs.S, 1);
      const Vec qdot = s->hamiltonian.inverse_legendre(xs.q, xs.p, S);
      const Eigen::MatrixXd w = s->friction(xs.q, qdot, S) / t;
      direct = direct_expansion(w, [](const Gradient& y) { return y.p(); }, ent, f, g, m, n);
    } else if (const auto* ns = std::get_if<NoSympSystemSpec>(&spec)) {
      const Eigen::MatrixXd w = ns->friction_inverse / t;
      direct = direct_expansion(w, [](const Gradient& y) { return y.q(); }, ent, f, g, m, n);
    } else if (const auto* l = std::get_if<LieSystemSpec>(&spec)) {
      const Eigen::MatrixXd w = l->friction / t;
      direct = direct_expansion(w, [](const Gradient& y) { return y.mu(); }, ent, f, g, m, n);
    }
    bump(out, "kn_vs_direct", direct.scale > 0.0 ? std::abs(value - direct.value) / direct.scale : 0.0);
  });
  report.thresholds["kn_vs_direct"] = Tolerances::kn_agreement;
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------

double relative_violation(double x, double y) noexcept {
  const double scale = std::max(std::abs(x), std::abs(y));
  if (scale == 0.0) return 0.0;
  return std::abs(x - y) / scale;
}

Observable random_observable(std::uint64_t seed, const Layout& layout, unsigned degree) {
  SplitMix64 rng(seed);
  const std::size_t nv = layout.size();
  constexpr std::size_t kDenseLimit = 256;
  constexpr std::size_t kSparseTerms = 16;
  std::vector<Term> terms;
  if (monomial_count(nv, degree, kDenseLimit) <= kDenseLimit) {
    for (unsigned d = 0; d <= degree; ++d) {
      std::vector<std::vector<std::size_t>> monomials;
      std::vector<std::size_t> prefix;
      enumerate(nv, d, 0, prefix, monomials);
      for (auto& vars : monomials) terms.push_back({rng.uniform(-2.0, 2.0), std::move(vars)});
    }
  } else {
    for (std::size_t t = 0; t < kSparseTerms; ++t) {
      Term term;
      term.coef = rng.uniform(-2.0, 2.0);
      const auto d = static_cast<std::size_t>(rng.below(degree + 1ULL));
      for (std::size_t k = 0; k < d; ++k) term.vars.push_back(static_cast<std::size_t>(rng.below(nv)));
      std::sort(term.vars.begin(), term.vars.end());
      terms.push_back(std::move(term));
    }
  }
  auto poly = std::make_shared<const Polynomial>(layout, std::move(terms));
  return Observable(
      layout.cls, [poly](const State& x) { return poly->value(x); },
      [poly](const State& x) { return poly->gradient(x); },
      "random_" + std::to_string(seed));
}

double jacobi_cyclic_sum(const Bracket2& bracket, const Observable& f, const Observable& g,
                         const Observable& h, const State& x) {
  auto nested = [&bracket](const Observable& a, const Observable& b) {
    return Observable(bracket.state_class(),
                      [bracket, a, b](const State& y) { return bracket(a, b, y); });
  };
  return bracket(f, nested(g, h), x) + bracket(g, nested(h, f), x) + bracket(h, nested(f, g), x);
}

DirectValue metric4_symmetric_direct(const SimpleSystemSpec& spec, const Observable& f,
                                     const Observable& g, const Observable& m, const Observable& n,
                                     const State& x) {
  const auto& xs = std::get<StateSimple>(x);
  const VecView S(&xs.S, 1);
  const double t = checked_temperature(spec, xs);
  const Vec qdot = spec.hamiltonian.inverse_legendre(xs.q, xs.p, S);
  const Eigen::MatrixXd w = spec.friction(xs.q, qdot, S) / t;
  return direct_expansion(
      w, [](const Gradient& y) { return y.p(); }, [](const Gradient& y) { return y.entropy(); },
      grad(f, x), grad(g, x), grad(m, x), grad(n, x));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"symmetry", "equivalence", "conservation", "jacobi",
                                                 "kn_agreement"};
  return names;
}

VerifyReport run_suite(std::string_view suite, const SystemSpec& spec, std::uint64_t seed,
                       std::size_t n_cases, const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.suite = std::string(suite);
  report.system = system_name(spec);
  report.seed = seed;
  report.cases = n_cases;
  if (suite == "symmetry") {
    report = symmetry_suite(spec, seed, n_cases, options, std::move(report));
  } else if (suite == "equivalence") {
    report = equivalence_suite(spec, seed, n_cases, options, std::move(report));
  } else if (suite == "conservation") {
    report = conservation_suite(spec, seed, n_cases, options, std::move(report));
  } else if (suite == "jacobi") {
    report = jacobi_suite(spec, seed, n_cases, options, std::move(report));
  } else if (suite == "kn_agreement") {
    report = kn_suite(spec, seed, n_cases, options, std::move(report));
  } else {
    throw Error(ErrorCode::UnsupportedSuite, "unknown suite '" + std::string(suite) + "'");
  }
  report.pass = true;
  for (const auto& [key, limit] : report.thresholds) {
    const auto it = report.violations.find(key);
    const double v = it == report.violations.end() ? 0.0 : it->second;
    if (!(v <= limit)) report.pass = false;
  }
  for (const auto& [key, v] : report.violations) {
    if (!report.thresholds.contains(key) || std::isnan(v)) report.pass = false;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string to_json(const VerifyReport& report, bool include_wall_time) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["system"] = report.system;
  j["seed"] = report.seed;
  j["cases"] = report.cases;
  j["violations"] = report.violations;
  j["thresholds"] = report.thresholds;
  j["pass"] = report.pass;
  if (include_wall_time) j["wall_seconds"] = report.wall_seconds;
  return j.dump(2);
}

}  // namespace metriplectic
