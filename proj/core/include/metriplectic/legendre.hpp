#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "metriplectic/vector_ops.hpp"

namespace metriplectic {

struct LagrangianPartials {
  Vec dq;
  Vec dqdot;
  Vec dS;
};

/// L(q, qdot, S_1..S_N) with analytic partials. `kinetic_form` is set when
/// L = qdot^T M(q,S) qdot / 2 - U(q,S); it must be symmetric positive definite.
struct LagrangianSide {
  std::size_t dim = 0;
  std::size_t entropy_count = 1;
  std::function<double(VecView q, VecView qdot, VecView S)> value;
  std::function<LagrangianPartials(VecView q, VecView qdot, VecView S)> partials;
  std::function<Eigen::MatrixXd(VecView q, VecView S)> kinetic_form;
};

struct HamiltonianPartials {
  Vec dq;
  Vec dp;
  Vec dS;
};

/// H(q, p, S) = <p, qdot> - L with qdot recovered by the inverse transform.
struct HamiltonianSide {
  std::size_t dim = 0;
  std::size_t entropy_count = 1;
  std::function<double(VecView q, VecView p, VecView S)> value;
  std::function<HamiltonianPartials(VecView q, VecView p, VecView S)> partials;
  std::function<Vec(VecView q, VecView p, VecView S)> inverse_legendre;
};

struct LegendreOptions {
  double relative_tolerance = 1e-12;  // ||r|| <= tol * (1 + ||p||)
  int max_iterations = 50;
  double max_condition = 1e12;        // Hessian d2L/dqdot2 conditioning limit
};

/// p = dL/dqdot.
[[nodiscard]] Vec momentum(const LagrangianSide& ls, VecView q, VecView qdot, VecView S);

/// Solves dL/dqdot(q, qdot, S) = p for qdot: a Cholesky solve when the
/// kinetic form is declared, Newton with a finite-difference Hessian otherwise.
/// Throws LegendreInversionFailure for a degenerate or non-convergent transform.
[[nodiscard]] Vec invert_legendre(const LagrangianSide& ls, VecView q, VecView p, VecView S,
                                  const LegendreOptions& options = {});

/// Builds the Hamiltonian side. Partials use dH/dq = -dL/dq, dH/dp = qdot,
/// dH/dS = -dL/dS evaluated at qdot(q, p, S).
[[nodiscard]] HamiltonianSide to_hamiltonian(const LagrangianSide& ls,
                                             const LegendreOptions& options = {});

/// T = dH/dS for a single-entropy system.
[[nodiscard]] double temperature(const HamiltonianSide& hs, VecView q, VecView p, VecView S);

/// T_i = dH/dS_i.
[[nodiscard]] Vec temperatures(const HamiltonianSide& hs, VecView q, VecView p, VecView S);

}  // namespace metriplectic
