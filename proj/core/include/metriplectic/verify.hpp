#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "metriplectic/dynamics.hpp"
#include "metriplectic/observable.hpp"
#include "metriplectic/state.hpp"

namespace metriplectic {

/// Every tolerance used by the suites, in one place.
struct Tolerances {
  static constexpr double symmetry = 1e-12;            // relative, analytic gradients
  static constexpr double symmetry_fd = 1e-8;          // relative, FD gradients
  static constexpr double equivalence = 1e-10;         // ||Δ||∞ / (1 + ||rhs_EL||∞)
  static constexpr double equivalence_fluid = 1e-8;
  static constexpr double equivalence_fd = 1e-6;
  static constexpr double first_vs_symmetric = 1e-10;
  static constexpr double first_form_k_floor = 1e-6;   // compare forms only where |K| exceeds this
  static constexpr double entropy_rate = 1e-12;        // allowed negative entropy rate / step change
  static constexpr double energy_rate = 1e-10;         // |dH/dt| relative to its term scale
  static constexpr double energy_drift_run = 1e-8;     // short rk4 run, relative
  static constexpr double mass_per_step = 1e-13;       // fluid, relative
  static constexpr double jacobi = 1e-5;               // absolute
  static constexpr double kn_agreement = 1e-12;        // relative to the summed term magnitudes
  static constexpr double reduction = 1e-10;           // reduced 2-brackets vs reduce_to_2
  static constexpr std::size_t states_per_case = 20;
  static constexpr unsigned observable_degree = 3;
  static constexpr unsigned jacobi_degree = 2;
};

struct VerifyReport {
  std::string suite;
  std::string system;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::map<std::string, double> violations;  // invariant -> max violation
  std::map<std::string, double> thresholds;  // invariant -> allowed maximum
  bool pass = false;
  double wall_seconds = 0.0;                 // not serialized unless asked for
};

/// {suite, system, seed, cases, violations, thresholds, pass}; keys sorted.
[[nodiscard]] std::string to_json(const VerifyReport& report, bool include_wall_time = false);

struct SuiteOptions {
  bool use_fd = false;     // strip analytic gradients from the random observables / H
  std::size_t jobs = 1;    // shard states across threads
};

[[nodiscard]] const std::vector<std::string>& suite_names();

/// Throws UnsupportedSuite for an unknown suite or an unsupported suite/system pair.
[[nodiscard]] VerifyReport run_suite(std::string_view suite, const SystemSpec& spec,
                                     std::uint64_t seed, std::size_t n_cases,
                                     const SuiteOptions& options = {});

/// Polynomial with coefficients uniform in [-2, 2] drawn from SplitMix64(seed).
/// With at most 256 monomials of degree <= `degree` every monomial gets a
/// coefficient, in graded lexicographic order; otherwise 16 sparse terms are
/// drawn as (coefficient, degree = next() % (degree+1), variables next() % n).
[[nodiscard]] Observable random_observable(std::uint64_t seed, const Layout& layout,
                                           unsigned degree);

/// |x - y| / max(|x|, |y|), zero when both vanish.
[[nodiscard]] double relative_violation(double x, double y) noexcept;

/// {F,{G,H}} + {G,{H,F}} + {H,{F,G}} with the outer gradients by central differences.
[[nodiscard]] double jacobi_cyclic_sum(const Bracket2& bracket, const Observable& f,
                                       const Observable& g, const Observable& h, const State& x);

/// Term-by-term expansion of the simple-system symmetric 4-bracket, without the
/// Kulkarni-Nomizu factorization. Returns {value, sum of |terms|}.
struct DirectValue {
  double value = 0.0;
  double scale = 0.0;
};
[[nodiscard]] DirectValue metric4_symmetric_direct(const SimpleSystemSpec& spec, const Observable& f,
                                                   const Observable& g, const Observable& m,
                                                   const Observable& n, const State& x);

}  // namespace metriplectic
