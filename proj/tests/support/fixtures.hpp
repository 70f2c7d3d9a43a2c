#pragma once

#include <Eigen/Dense>

#include "metriplectic/dynamics.hpp"
#include "metriplectic/systems.hpp"

namespace metriplectic::testing {

/// Ideal gas with U0 = 3, c_v = 1.5, n = 1: at x = 1, S = 0 the temperature is 2.
inline InternalEnergyModel warm_gas(double area = 1.0) {
  IdealGasParams p;
  p.U0 = 3.0;
  p.area = area;
  p.V0 = area;
  return ideal_gas_energy(p);
}

inline SimpleSystemSpec unit_piston(double lambda = 1.0) { return builtin_piston(1.0, lambda, warm_gas()); }

inline StateSimple piston_state(double x, double p, double S) { return {{x}, {p}, S}; }

inline DiscreteSystemSpec two_pistons(double kappa, double lambda1 = 0.0, double lambda2 = 0.0) {
  IdealGasParams left;
  left.U0 = 3.0;
  IdealGasParams right;
  right.U0 = 1.5;
  return builtin_two_pistons(1.0, lambda1, lambda2, kappa, ideal_gas_energy(left), ideal_gas_energy(right),
                             PistonGeometry{1.0, 1.0, 2.0});
}

/// r = 1 chemical system: U = (psi - 0)^2 / 2 + S, lambda = 2.
inline NoSympSystemSpec scalar_chemical() {
  return builtin_chemical(Eigen::MatrixXd::Identity(1, 1), {0.0}, Eigen::MatrixXd::Constant(1, 1, 2.0),
                          linear_entropy_energy(1.0));
}

inline LieSystemSpec rigid_body(const Eigen::Matrix3d& lambda = Eigen::Matrix3d::Identity()) {
  return builtin_rigid_body_thermo(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal(), lambda,
                                   linear_entropy_energy(1.0));
}

}  // namespace metriplectic::testing
