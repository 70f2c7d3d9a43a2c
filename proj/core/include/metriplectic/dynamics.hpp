#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "metriplectic/brackets.hpp"
#include "metriplectic/error.hpp"
#include "metriplectic/fluid1d.hpp"
#include "metriplectic/observable.hpp"
#include "metriplectic/state.hpp"
#include "metriplectic/systems.hpp"

namespace metriplectic {

using SystemSpec =
    std::variant<SimpleSystemSpec, DiscreteSystemSpec, NoSympSystemSpec, LieSystemSpec, FluidSystemSpec>;

[[nodiscard]] const std::string& system_name(const SystemSpec& spec);
[[nodiscard]] StateClass system_state_class(const SystemSpec& spec);
[[nodiscard]] Layout system_layout(const SystemSpec& spec);

[[nodiscard]] Observable hamiltonian_observable(const SystemSpec& spec);
/// Total entropy S (Simple, Lie), S_1 + .. + S_N (Discrete), dx sum s (Field1D).
[[nodiscard]] Observable entropy_observable(const SystemSpec& spec);

[[nodiscard]] State sample_state(const SystemSpec& spec, SplitMix64& rng);
/// Shape, finiteness and the spec's admissible-domain guard.
[[nodiscard]] bool is_admissible(const SystemSpec& spec, const State& x);
/// T (or T_i, or T per cell).
[[nodiscard]] Vec temperatures(const SystemSpec& spec, const State& x);
/// Friction power K = q̇^T Λ q̇ for simple systems.
[[nodiscard]] std::optional<double> friction_power(const SystemSpec& spec, const State& x);

enum class EngineKind { EulerLagrange, Bracket };
enum class BracketForm { Symmetric, First };
enum class Method { RK4, Euler };

[[nodiscard]] std::string_view to_string(EngineKind kind) noexcept;
[[nodiscard]] std::string_view to_string(BracketForm form) noexcept;
[[nodiscard]] std::string_view to_string(Method method) noexcept;

struct EngineOptions {
  BracketForm bracket_form = BracketForm::Symmetric;  // simple systems only
  double k_min = 1e-10;                               // first-form guard
  bool fd_hamiltonian = false;  // differentiate H by central differences
};

/// Time derivative of the state, in the state's own layout.
[[nodiscard]] State rhs_euler_lagrange(const SystemSpec& spec, const State& x);

/// tangent_j = {e_j, H} + (e_j, H; S, H) for every coordinate observable e_j.
class BracketEngine {
 public:
  explicit BracketEngine(SystemSpec spec, EngineOptions options = {});

  [[nodiscard]] State rhs(const State& x) const;
  [[nodiscard]] const std::optional<Bracket2>& poisson() const noexcept { return poisson_; }
  [[nodiscard]] const Bracket4& metric() const noexcept { return metric_; }
  [[nodiscard]] const Observable& hamiltonian() const noexcept { return hamiltonian_; }
  [[nodiscard]] const Observable& entropy() const noexcept { return entropy_; }

 private:
  SystemSpec spec_;
  std::optional<Bracket2> poisson_;  // absent for systems without symplectic part
  Bracket4 metric_;
  Observable hamiltonian_;
  Observable entropy_;
};

[[nodiscard]] State rhs_bracket(const SystemSpec& spec, const State& x, EngineOptions options = {});

/// The Poisson and metric brackets the bracket engine uses for a system.
[[nodiscard]] std::optional<Bracket2> system_poisson(const SystemSpec& spec);
[[nodiscard]] Bracket4 system_metric(const SystemSpec& spec, EngineOptions options = {});

struct IntegratorOptions {
  double dt = 1e-3;
  double t_final = 1.0;
  Method method = Method::RK4;
  EngineKind engine = EngineKind::Bracket;
  EngineOptions engine_options;
};

struct StepDiagnostics {
  double H = 0.0;
  double S_total = 0.0;
  double dSdt = 0.0;
  Vec T;
  std::optional<double> K;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<StepDiagnostics> diagnostics;
  /// Set when a step left the admissible set; states hold the accepted prefix.
  std::optional<Error> aborted;

  void throw_if_aborted() const;
};

/// Fixed-step explicit integration with diagnostics at every recorded state.
/// A step that leaves the admissible set ends the run with DomainViolation
/// carrying the step index.
[[nodiscard]] Trajectory integrate(const SystemSpec& spec, const State& x0,
                                   const IntegratorOptions& options);

/// Diagnostics at a single state for a given engine.
[[nodiscard]] StepDiagnostics diagnose(const SystemSpec& spec, const State& x, const State& rate);

}  // namespace metriplectic
