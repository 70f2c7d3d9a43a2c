#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metriplectic/legendre.hpp"
#include "metriplectic/random.hpp"
#include "metriplectic/state.hpp"
#include "metriplectic/vector_ops.hpp"

namespace metriplectic {

/// Friction tensor Lambda(q, qdot, S); F^fr = -Lambda qdot.
using FrictionFn = std::function<Eigen::MatrixXd(VecView q, VecView qdot, VecView S)>;

/// Scalar energy f(S) of a thermal reservoir; f' is the temperature.
struct EntropyEnergy {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// f(S) = T0 * c * exp(S / c), so T = T0 * exp(S / c) > 0.
[[nodiscard]] EntropyEnergy exponential_entropy_energy(double t0 = 1.0, double c = 1.0);
/// f(S) = T0 * S (constant temperature T0 > 0).
[[nodiscard]] EntropyEnergy linear_entropy_energy(double t0 = 1.0);

/// Gas energy U(x, S) as a function of the chamber length x (V = area * x).
struct InternalEnergyModel {
  double area = 1.0;
  double reference_entropy = 0.0;  // sampling hint
  double entropy_scale = 1.0;      // sampling hint
  double reference_length = 1.0;   // sampling hint
  std::function<double(double x, double S)> energy;
  std::function<double(double x, double S)> d_dx;
  std::function<double(double x, double S)> d_dS;

  [[nodiscard]] double temperature(double x, double S) const { return d_dS(x, S); }
  [[nodiscard]] double pressure(double x, double S) const { return -d_dx(x, S) / area; }
};

struct IdealGasParams {
  double n_moles = 1.0;
  double c_v = 1.5;
  double gas_constant = 1.0;
  double area = 1.0;
  double V0 = 1.0;
  double S0 = 0.0;
  double U0 = 1.5;
};

/// U(x,S) = U0 (V0 / (A x))^(R / c_v) exp((S - S0) / (n c_v)).
[[nodiscard]] InternalEnergyModel ideal_gas_energy(const IdealGasParams& params);

struct SimpleSystemSpec {
  std::string name;
  std::size_t dim = 0;
  LagrangianSide lagrangian;
  HamiltonianSide hamiltonian;  // derived at registration
  FrictionFn friction;
  std::function<bool(const StateSimple&)> admissible;
  std::function<StateSimple(SplitMix64&)> sampler;
  bool dissipative = true;
};

struct DiscreteSystemSpec {
  std::string name;
  std::size_t dim = 0;
  std::size_t entropy_count = 0;
  LagrangianSide lagrangian;
  HamiltonianSide hamiltonian;  // derived at registration
  std::vector<FrictionFn> frictions;  // Lambda_i, one per subsystem
  Eigen::MatrixXd kappa;              // heat-transfer coefficients, zero diagonal
  std::function<bool(const StateDiscrete&)> admissible;
  std::function<StateDiscrete(SplitMix64&)> sampler;
  bool dissipative = true;
};

struct NoSympPartials {
  Vec dq;
  double dS = 0.0;
};

/// Lagrangian L(q, S) with no velocity dependence; H = -L. States are
/// StateSimple with an empty momentum block.
struct NoSympSystemSpec {
  std::string name;
  std::size_t dim = 0;
  std::function<double(VecView q, double S)> lagrangian;
  std::function<NoSympPartials(VecView q, double S)> lagrangian_partials;
  Eigen::MatrixXd friction;          // Lambda, symmetric positive definite
  Eigen::MatrixXd friction_inverse;  // Gamma, cached at registration
  std::function<bool(const StateSimple&)> admissible;
  std::function<StateSimple(SplitMix64&)> sampler;
  bool dissipative = true;
};

struct LiePartials {
  Vec dxi;
  Vec da;
  double ds = 0.0;
};

struct LieHamiltonianPartials {
  Vec dmu;  // = xi
  Vec da;
  double ds = 0.0;  // = T
};

/// Finite-dimensional Euler-Poincare system on a Lie algebra g acting on V.
struct LieSystemSpec {
  std::string name;
  std::size_t algebra_dim = 0;
  std::size_t rep_dim = 0;
  /// c[k][i][j] stored at (k * n + i) * n + j, with [e_i, e_j] = sum_k c[k][i][j] e_k.
  Vec structure_constants;
  /// Matrices of the basis elements acting on V (rep_dim x rep_dim each).
  std::vector<Eigen::MatrixXd> representation;
  /// sigma with xi . s = <sigma, xi> s. Zero means entropy is not acted on.
  Vec entropy_action;
  std::function<double(VecView xi, VecView a, double s)> lagrangian;
  std::function<LiePartials(VecView xi, VecView a, double s)> lagrangian_partials;
  std::function<Vec(VecView mu, VecView a, double s)> inverse_legendre;  // xi(mu, a, s)
  Eigen::MatrixXd friction;  // Lambda, symmetric bilinear form on g
  std::function<bool(const StateLie&)> admissible;
  std::function<StateLie(SplitMix64&)> sampler;
  bool dissipative = true;

  [[nodiscard]] double c(std::size_t k, std::size_t i, std::size_t j) const {
    return structure_constants[(k * algebra_dim + i) * algebra_dim + j];
  }
};

// Registration: derive what can be derived and validate the modeling
// assumptions. All throw SpecError on invalid input.
[[nodiscard]] SimpleSystemSpec make_simple_system(SimpleSystemSpec spec);
[[nodiscard]] DiscreteSystemSpec make_discrete_system(DiscreteSystemSpec spec);
[[nodiscard]] NoSympSystemSpec make_no_symplectic_system(NoSympSystemSpec spec);
[[nodiscard]] LieSystemSpec make_lie_system(LieSystemSpec spec);

/// Lambda evaluated at (q, qdot(q,p,S), S).
[[nodiscard]] Eigen::MatrixXd friction_matrix(const SimpleSystemSpec& spec, const StateSimple& x);
/// F^fr = -Lambda qdot.
[[nodiscard]] Vec friction_force(const SimpleSystemSpec& spec, const StateSimple& x);
/// K = -<F^fr, dH/dp>, the power dissipated by friction.
[[nodiscard]] double dissipated_power(const SimpleSystemSpec& spec, const StateSimple& x);

/// J_ij = -kappa_ij + delta_ij sum_k kappa_ik.
[[nodiscard]] Eigen::MatrixXd heat_flux_matrix(const Eigen::MatrixXd& kappa);
[[nodiscard]] Eigen::MatrixXd heat_flux_matrix(const DiscreteSystemSpec& spec);

// Lie algebra helpers.
[[nodiscard]] Vec commutator(const LieSystemSpec& spec, VecView xi, VecView eta);
[[nodiscard]] Vec act_on_parameter(const LieSystemSpec& spec, VecView xi, VecView a);
[[nodiscard]] double act_on_entropy(const LieSystemSpec& spec, VecView xi, double s);
[[nodiscard]] double lie_hamiltonian(const LieSystemSpec& spec, const StateLie& x);
[[nodiscard]] LieHamiltonianPartials lie_hamiltonian_partials(const LieSystemSpec& spec,
                                                             const StateLie& x);

// Built-in catalog.

[[nodiscard]] SimpleSystemSpec builtin_piston(double mass,
                                              std::function<double(double x, double S)> friction_coeff,
                                              InternalEnergyModel eos);
[[nodiscard]] SimpleSystemSpec builtin_piston(double mass, double friction_coeff,
                                              InternalEnergyModel eos);

struct PistonGeometry {
  double area_left = 1.0;
  double area_right = 1.0;
  double length = 2.0;
};

/// Two gas chambers separated by a rigid piston pair; chamber lengths are x
/// and length - x. The eos areas must match the geometry.
[[nodiscard]] DiscreteSystemSpec builtin_two_pistons(double total_mass, double friction_left,
                                                     double friction_right, double kappa,
                                                     InternalEnergyModel eos_left,
                                                     InternalEnergyModel eos_right,
                                                     PistonGeometry geometry);

/// U(psi, S) = (psi - psi*)^T Q (psi - psi*) / 2 + f(S), L = -U, friction lambda.
[[nodiscard]] NoSympSystemSpec builtin_chemical(const Eigen::MatrixXd& q_matrix, Vec psi_star,
                                                const Eigen::MatrixXd& lambda, EntropyEnergy f);

/// so(3) with l(xi, s) = xi^T I xi / 2 - e(s), no advected parameter.
[[nodiscard]] LieSystemSpec builtin_rigid_body_thermo(const Eigen::Matrix3d& inertia,
                                                      const Eigen::Matrix3d& lambda,
                                                      EntropyEnergy e);

/// L = qdot^T M qdot / 2 - q^T K q / 2 - f(S) with constant friction Lambda.
/// With dissipative = false the positive-semidefinite check on Lambda is skipped.
[[nodiscard]] SimpleSystemSpec builtin_damped_oscillator(const Eigen::MatrixXd& mass,
                                                         const Eigen::MatrixXd& stiffness,
                                                         const Eigen::MatrixXd& lambda,
                                                         EntropyEnergy f, bool dissipative = true);

}  // namespace metriplectic
