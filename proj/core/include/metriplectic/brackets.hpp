#pragma once

#include <functional>
#include <string>
#include <vector>

#include "metriplectic/observable.hpp"
#include "metriplectic/state.hpp"
#include "metriplectic/systems.hpp"

namespace metriplectic {

/// Bracket evaluators work in two stages. `bind(x)` does the per-state work
/// (temperatures, friction tensors, ...) and returns a form acting on
/// gradients; `operator()` takes observables, requests each gradient once and
/// evaluates the bound form. Bound forms are cheap, short-lived and meant to be
/// used by one thread.
using Form2 = std::function<double(const Gradient&, const Gradient&)>;
using Form4 =
    std::function<double(const Gradient&, const Gradient&, const Gradient&, const Gradient&)>;

class Bracket2 {
 public:
  enum class Kind { Symplectic, Metric };
  using Binder = std::function<Form2(const State&)>;

  Bracket2(Kind kind, StateClass cls, Binder binder, std::string name = {});

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] StateClass state_class() const noexcept { return cls_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  [[nodiscard]] Form2 bind(const State& x) const;
  [[nodiscard]] double operator()(const Observable& f, const Observable& g, const State& x) const;

 private:
  Kind kind_;
  StateClass cls_;
  Binder binder_;
  std::string name_;
};

class Bracket4 {
 public:
  using Binder = std::function<Form4(const State&)>;

  Bracket4(StateClass cls, Binder binder, std::string name = {});

  [[nodiscard]] StateClass state_class() const noexcept { return cls_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  [[nodiscard]] Form4 bind(const State& x) const;
  [[nodiscard]] double operator()(const Observable& f, const Observable& g, const Observable& m,
                                  const Observable& n, const State& x) const;

 private:
  StateClass cls_;
  Binder binder_;
  std::string name_;
};

/// Symmetric 2-tensor a(F, G). Implementations must be bitwise symmetric.
class SymTensor2Field {
 public:
  using Binder = std::function<Form2(const State&)>;

  SymTensor2Field(StateClass cls, Binder binder, std::string name = {});

  [[nodiscard]] StateClass state_class() const noexcept { return cls_; }
  [[nodiscard]] Form2 bind(const State& x) const;
  [[nodiscard]] double operator()(const Observable& f, const Observable& g, const State& x) const;

 private:
  StateClass cls_;
  Binder binder_;
  std::string name_;
};

/// a(F,M)b(G,N) - a(F,N)b(G,M) + a(G,N)b(F,M) - a(G,M)b(F,N), accumulated so
/// that every 4-bracket symmetry holds bitwise when a and b are bitwise symmetric.
[[nodiscard]] double kn_combine(double a_fm, double a_fn, double a_gm, double a_gn, double b_fm,
                                double b_fn, double b_gm, double b_gn) noexcept;
[[nodiscard]] double kn_value(const Form2& a, const Form2& b, const Gradient& f, const Gradient& g,
                              const Gradient& m, const Gradient& n);

[[nodiscard]] Bracket4 kn_product(const SymTensor2Field& a, const SymTensor2Field& b,
                                  std::string name = "kn_product");

/// Pointwise sum of 4-brackets on the same state class.
[[nodiscard]] Bracket4 sum(const std::vector<Bracket4>& terms, std::string name = "sum");

/// (F, G) = b4(F, H; G, H).
[[nodiscard]] Bracket2 reduce_to_2(const Bracket4& b4, const Observable& h);

// Canonical symplectic bracket on (q, p); the entropy block does not enter.
[[nodiscard]] double poisson_canonical(const Observable& f, const Observable& g, const State& x);
[[nodiscard]] Bracket2 canonical_poisson(StateClass cls);
[[nodiscard]] double canonical_form(const Gradient& f, const Gradient& g);

/// T = dH/dS for a simple system; throws NonpositiveTemperature if T <= 0.
[[nodiscard]] double checked_temperature(const SimpleSystemSpec& spec, const StateSimple& x);

/// First form, prefactor 1/(T K) with K = q̇^T Λ q̇. Throws DegenerateK when |K| <= k_min.
[[nodiscard]] Bracket4 metric4_first_form(const SimpleSystemSpec& spec, double k_min = 1e-10);

/// Kulkarni-Nomizu form built from a(F,G) = <F_p, (Λ/T) G_p> and b(F,G) = F_S G_S.
[[nodiscard]] Bracket4 metric4_symmetric_form(const SimpleSystemSpec& spec);
[[nodiscard]] SymTensor2Field friction_tensor_field(const SimpleSystemSpec& spec);
[[nodiscard]] SymTensor2Field entropy_tensor_field(StateClass cls);

/// Friction bracket of subsystem i (zero-based) of a discrete system.
[[nodiscard]] Bracket4 metric4_friction(const DiscreteSystemSpec& spec, std::size_t subsystem);
/// Heat-transfer bracket between subsystems.
[[nodiscard]] Bracket4 metric4_transfer(const DiscreteSystemSpec& spec);
/// Sum of all friction brackets plus the transfer bracket.
[[nodiscard]] Bracket4 metric4_discrete(const DiscreteSystemSpec& spec);

/// Lie-Poisson bracket with advected parameter and entropy terms.
[[nodiscard]] Bracket2 lie_poisson(const LieSystemSpec& spec);
/// Kulkarni-Nomizu form with a(f,g) = <f_mu, (Λ/T) g_mu>, b(f,g) = f_s g_s.
[[nodiscard]] Bracket4 metric4_ep(const LieSystemSpec& spec);

/// Kulkarni-Nomizu form with a(F,G) = <F_q, (Γ/T) G_q>, b(F,G) = F_S G_S.
[[nodiscard]] Bracket4 metric4_no_symplectic(const NoSympSystemSpec& spec);

}  // namespace metriplectic
