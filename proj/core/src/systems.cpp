#include "metriplectic/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "metriplectic/error.hpp"

namespace metriplectic {

namespace {

constexpr std::uint64_t kRegistrationSeed = 0x5EED5EEDULL;
constexpr int kRegistrationSamples = 10;
constexpr double kSymmetryTolerance = 1e-12;

void spec_error(const std::string& what) { throw Error(ErrorCode::SpecError, what); }

void require_symmetric(const Eigen::MatrixXd& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    spec_error(what + " must be square");
  }
  const double scale = m.norm();
  if ((m - m.transpose()).norm() > kSymmetryTolerance * scale) {
    spec_error(what + " must be symmetric");
  }
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_psd(const Eigen::MatrixXd& m, const std::string& what) {
  if (min_eigenvalue(m) < -kSymmetryTolerance * m.norm()) {
    spec_error(what + " must be positive semidefinite");
  }
}

void require_spd(const Eigen::MatrixXd& m, const std::string& what) {
  require_symmetric(m, what);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    spec_error(what + " must be positive definite");
  }
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    spec_error(what + " must be positive and finite");
  }
}

Eigen::MatrixXd scalar_matrix(double v) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

EntropyEnergy exponential_entropy_energy(double t0, double c) {
  require_positive(t0, "reservoir temperature scale");
  require_positive(c, "reservoir entropy scale");
  return {[t0, c](double S) { return t0 * c * std::exp(S / c); },
          [t0, c](double S) { return t0 * std::exp(S / c); }};
}

EntropyEnergy linear_entropy_energy(double t0) {
  require_positive(t0, "reservoir temperature");
  return {[t0](double S) { return t0 * S; }, [t0](double) { return t0; }};
}

InternalEnergyModel ideal_gas_energy(const IdealGasParams& p) {
  require_positive(p.n_moles, "n_moles");
  require_positive(p.c_v, "c_v");
  require_positive(p.gas_constant, "gas_constant");
  require_positive(p.area, "area");
  require_positive(p.V0, "V0");
  require_positive(p.U0, "U0");
  if (!std::isfinite(p.S0)) spec_error("S0 must be finite");

  const double exponent = p.gas_constant / p.c_v;
  const double heat_capacity = p.n_moles * p.c_v;
  auto energy = [p, exponent, heat_capacity](double x, double S) {
    if (!(x > 0.0)) {
      throw Error(ErrorCode::DomainViolation, "chamber length must be positive");
    }
    return p.U0 * std::pow(p.V0 / (p.area * x), exponent) * std::exp((S - p.S0) / heat_capacity);
  };
  InternalEnergyModel model;
  model.area = p.area;
  model.reference_entropy = p.S0;
  model.entropy_scale = heat_capacity;
  model.reference_length = p.V0 / p.area;
  model.energy = energy;
  model.d_dx = [energy, exponent](double x, double S) { return -exponent * energy(x, S) / x; };
  model.d_dS = [energy, heat_capacity](double x, double S) { return energy(x, S) / heat_capacity; };
  return model;
}

// ---------------------------------------------------------------------------
// Registration

SimpleSystemSpec make_simple_system(SimpleSystemSpec spec) {
  if (spec.dim == 0) spec_error("simple system needs dim >= 1");
  if (spec.lagrangian.dim != spec.dim || spec.lagrangian.entropy_count != 1) {
    spec_error("Lagrangian dimensions do not match the simple system");
  }
  if (!spec.lagrangian.value || !spec.lagrangian.partials) spec_error("Lagrangian is incomplete");
  if (!spec.friction) spec_error("friction tensor is required");
  if (!spec.admissible || !spec.sampler) spec_error("admissible-domain and sampler callbacks are required");
  spec.hamiltonian = to_hamiltonian(spec.lagrangian);

  SplitMix64 rng(kRegistrationSeed);
  for (int k = 0; k < kRegistrationSamples; ++k) {
    const StateSimple x = spec.sampler(rng);
    if (x.q.size() != spec.dim || x.p.size() != spec.dim) spec_error("sampler returned a misshaped state");
    if (!spec.admissible(x)) spec_error("sampler returned an inadmissible state");
    const Eigen::MatrixXd lambda = friction_matrix(spec, x);
    if (lambda.rows() != static_cast<Eigen::Index>(spec.dim)) spec_error("friction tensor has wrong size");
    require_symmetric(lambda, "friction tensor Lambda");
    if (spec.dissipative) require_psd(lambda, "friction tensor Lambda");
  }
  return spec;
}

DiscreteSystemSpec make_discrete_system(DiscreteSystemSpec spec) {
  const auto n = spec.entropy_count;
  if (spec.dim == 0 || n == 0) spec_error("discrete system needs dim >= 1 and N >= 1");
  if (spec.lagrangian.dim != spec.dim || spec.lagrangian.entropy_count != n) {
    spec_error("Lagrangian dimensions do not match the discrete system");
  }
  if (spec.frictions.size() != n) spec_error("one friction tensor per subsystem is required");
  if (spec.kappa.rows() != static_cast<Eigen::Index>(n) || spec.kappa.cols() != static_cast<Eigen::Index>(n)) {
    spec_error("kappa must be N x N");
  }
  require_symmetric(spec.kappa, "heat-transfer matrix kappa");
  if ((spec.kappa.array() < 0.0).any()) spec_error("kappa entries must be nonnegative");
  spec.kappa.diagonal().setZero();
  if (!spec.admissible || !spec.sampler) spec_error("admissible-domain and sampler callbacks are required");
  spec.hamiltonian = to_hamiltonian(spec.lagrangian);

  SplitMix64 rng(kRegistrationSeed);
  for (int k = 0; k < kRegistrationSamples; ++k) {
    const StateDiscrete x = spec.sampler(rng);
    if (!spec.admissible(x)) spec_error("sampler returned an inadmissible state");
    const Vec qdot = spec.hamiltonian.inverse_legendre(x.q, x.p, x.S);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::MatrixXd lambda = spec.frictions[i](x.q, qdot, x.S);
      require_symmetric(lambda, "friction tensor Lambda_" + std::to_string(i + 1));
      if (spec.dissipative) require_psd(lambda, "friction tensor Lambda_" + std::to_string(i + 1));
    }
  }
  return spec;
}

NoSympSystemSpec make_no_symplectic_system(NoSympSystemSpec spec) {
  if (spec.dim == 0) spec_error("system needs dim >= 1");
  if (!spec.lagrangian || !spec.lagrangian_partials) spec_error("Lagrangian is incomplete");
  if (!spec.admissible || !spec.sampler) spec_error("admissible-domain and sampler callbacks are required");
  if (spec.friction.rows() != static_cast<Eigen::Index>(spec.dim)) spec_error("friction matrix has wrong size");
  require_symmetric(spec.friction, "friction matrix Lambda");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(spec.friction);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                               : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw Error(ErrorCode::SingularFrictionMatrix,
                "friction matrix is singular (condition number " + std::to_string(cond) + ")");
  }
  if (spec.dissipative) require_psd(spec.friction, "friction matrix Lambda");
  spec.friction_inverse = spec.friction.inverse();
  // Gamma is symmetric in exact arithmetic; keep it bitwise symmetric.
  spec.friction_inverse = 0.5 * (spec.friction_inverse + spec.friction_inverse.transpose()).eval();
  return spec;
}

LieSystemSpec make_lie_system(LieSystemSpec spec) {
  const std::size_t n = spec.algebra_dim;
  if (n == 0) spec_error("Lie algebra dimension must be >= 1");
  if (spec.structure_constants.size() != n * n * n) spec_error("structure constants must have n^3 entries");
  if (!spec.lagrangian || !spec.lagrangian_partials || !spec.inverse_legendre) {
    spec_error("reduced Lagrangian is incomplete");
  }
  if (!spec.admissible || !spec.sampler) spec_error("admissible-domain and sampler callbacks are required");

  double cmax = 0.0;
  for (double v : spec.structure_constants) cmax = std::max(cmax, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, cmax * cmax);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(spec.c(k, i, j) + spec.c(k, j, i)) > 1e-12 * std::max(1.0, cmax)) {
          spec_error("structure constants must be antisymmetric in their lower indices");
        }
      }
    }
  }
  // Jacobi: [[e_i,e_j],e_l] + [[e_j,e_l],e_i] + [[e_l,e_i],e_j] = 0.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
          double acc = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            acc += spec.c(k, i, j) * spec.c(m, k, l) + spec.c(k, j, l) * spec.c(m, k, i) +
                   spec.c(k, l, i) * spec.c(m, k, j);
          }
          if (std::abs(acc) > tol) spec_error("structure constants violate the Jacobi identity");
        }
      }
    }
  }

  if (spec.rep_dim > 0) {
    if (spec.representation.size() != n) spec_error("one representation matrix per basis element is required");
    const auto k = static_cast<Eigen::Index>(spec.rep_dim);
    for (const auto& r : spec.representation) {
      if (r.rows() != k || r.cols() != k) spec_error("representation matrices must be rep_dim x rep_dim");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Eigen::MatrixXd lhs = spec.representation[i] * spec.representation[j] -
                              spec.representation[j] * spec.representation[i];
        for (std::size_t m = 0; m < n; ++m) lhs -= spec.c(m, i, j) * spec.representation[m];
        if (lhs.norm() > tol * std::max<double>(1.0, spec.representation[i].norm())) {
          spec_error("representation is not a Lie algebra homomorphism");
        }
      }
    }
  } else if (!spec.representation.empty()) {
    spec_error("representation given for an empty parameter space");
  }

  if (spec.entropy_action.empty()) spec.entropy_action.assign(n, 0.0);
  if (spec.entropy_action.size() != n) spec_error("entropy action needs one entry per basis element");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += spec.entropy_action[k] * spec.c(k, i, j);
      if (std::abs(acc) > tol) spec_error("entropy action must vanish on commutators");
    }
  }

  if (spec.friction.rows() != static_cast<Eigen::Index>(n)) spec_error("friction form has wrong size");
  require_symmetric(spec.friction, "friction form Lambda");
  if (spec.dissipative) require_psd(spec.friction, "friction form Lambda");

  SplitMix64 rng(kRegistrationSeed);
  for (int s = 0; s < kRegistrationSamples; ++s) {
    const StateLie x = spec.sampler(rng);
    if (x.mu.size() != n || x.a.size() != spec.rep_dim) spec_error("sampler returned a misshaped state");
    if (!spec.admissible(x)) spec_error("sampler returned an inadmissible state");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Derived quantities

Eigen::MatrixXd friction_matrix(const SimpleSystemSpec& spec, const StateSimple& x) {
  const VecView S(&x.S, 1);
  const Vec qdot = spec.hamiltonian.inverse_legendre(x.q, x.p, S);
  return spec.friction(x.q, qdot, S);
}

Vec friction_force(const SimpleSystemSpec& spec, const StateSimple& x) {
  const VecView S(&x.S, 1);
  const Vec qdot = spec.hamiltonian.inverse_legendre(x.q, x.p, S);
  const Eigen::MatrixXd lambda = spec.friction(x.q, qdot, S);
  return to_vec(-(lambda * as_eigen(qdot)));
}

double dissipated_power(const SimpleSystemSpec& spec, const StateSimple& x) {
  const VecView S(&x.S, 1);
  const Vec qdot = spec.hamiltonian.inverse_legendre(x.q, x.p, S);
  const Vec force = friction_force(spec, x);
  return -dot(force, qdot);
}

Eigen::MatrixXd heat_flux_matrix(const Eigen::MatrixXd& kappa) {
  const Eigen::Index n = kappa.rows();
  Eigen::MatrixXd j = -kappa;
  for (Eigen::Index i = 0; i < n; ++i) {
    j(i, i) += kappa.row(i).sum();
  }
  return j;
}

Eigen::MatrixXd heat_flux_matrix(const DiscreteSystemSpec& spec) { return heat_flux_matrix(spec.kappa); }

Vec commutator(const LieSystemSpec& spec, VecView xi, VecView eta) {
  const std::size_t n = spec.algebra_dim;
  Vec out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        acc += spec.c(k, i, j) * xi[i] * eta[j];
      }
    }
    out[k] = acc;
  }
  return out;
}

Vec act_on_parameter(const LieSystemSpec& spec, VecView xi, VecView a) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.rep_dim));
  for (std::size_t i = 0; i < spec.algebra_dim && spec.rep_dim > 0; ++i) {
    out += xi[i] * (spec.representation[i] * as_eigen(a));
  }
  return to_vec(out);
}

double act_on_entropy(const LieSystemSpec& spec, VecView xi, double s) {
  return dot(spec.entropy_action, xi) * s;
}

double lie_hamiltonian(const LieSystemSpec& spec, const StateLie& x) {
  const Vec xi = spec.inverse_legendre(x.mu, x.a, x.s);
  return dot(x.mu, xi) - spec.lagrangian(xi, x.a, x.s);
}

LieHamiltonianPartials lie_hamiltonian_partials(const LieSystemSpec& spec, const StateLie& x) {
  Vec xi = spec.inverse_legendre(x.mu, x.a, x.s);
  const LiePartials lp = spec.lagrangian_partials(xi, x.a, x.s);
  LieHamiltonianPartials hp;
  hp.da.resize(lp.da.size());
  for (std::size_t i = 0; i < lp.da.size(); ++i) hp.da[i] = -lp.da[i];
  hp.ds = -lp.ds;
  hp.dmu = std::move(xi);
  return hp;
}

// ---------------------------------------------------------------------------
// Built-ins

SimpleSystemSpec builtin_piston(double mass, std::function<double(double x, double S)> friction_coeff,
                                InternalEnergyModel eos) {
  require_positive(mass, "piston mass");
  if (!friction_coeff) spec_error("friction coefficient is required");

  SimpleSystemSpec spec;
  spec.name = "piston";
  spec.dim = 1;
  spec.lagrangian.dim = 1;
  spec.lagrangian.entropy_count = 1;
  spec.lagrangian.value = [mass, eos](VecView q, VecView qdot, VecView S) {
    return 0.5 * mass * qdot[0] * qdot[0] - eos.energy(q[0], S[0]);
  };
  spec.lagrangian.partials = [mass, eos](VecView q, VecView qdot, VecView S) {
    return LagrangianPartials{{-eos.d_dx(q[0], S[0])}, {mass * qdot[0]}, {-eos.d_dS(q[0], S[0])}};
  };
  spec.lagrangian.kinetic_form = [mass](VecView, VecView) { return scalar_matrix(mass); };
  spec.friction = [friction_coeff](VecView q, VecView, VecView S) {
    const double lambda = friction_coeff(q[0], S[0]);
    if (!(lambda >= 0.0)) {
      throw Error(ErrorCode::SpecError, "piston friction coefficient must be nonnegative");
    }
    return scalar_matrix(lambda);
  };
  spec.admissible = [](const StateSimple& x) { return x.q.size() == 1 && x.q[0] > 0.0; };
  spec.sampler = [eos](SplitMix64& rng) {
    StateSimple x;
    x.q = {eos.reference_length * rng.uniform(0.5, 2.0)};
    x.p = {rng.uniform(-3.0, 3.0)};
    x.S = eos.reference_entropy + eos.entropy_scale * rng.uniform(-0.5, 0.5);
    return x;
  };
  return make_simple_system(std::move(spec));
}

SimpleSystemSpec builtin_piston(double mass, double friction_coeff, InternalEnergyModel eos) {
  if (!(friction_coeff >= 0.0)) spec_error("piston friction coefficient must be nonnegative");
  return builtin_piston(mass, [friction_coeff](double, double) { return friction_coeff; }, std::move(eos));
}

DiscreteSystemSpec builtin_two_pistons(double total_mass, double friction_left, double friction_right,
                                       double kappa, InternalEnergyModel eos_left,
                                       InternalEnergyModel eos_right, PistonGeometry geometry) {
  require_positive(total_mass, "total mass M");
  if (!(friction_left >= 0.0) || !(friction_right >= 0.0)) spec_error("friction coefficients must be nonnegative");
  if (!(kappa >= 0.0)) spec_error("kappa must be nonnegative");
  require_positive(geometry.area_left, "left area");
  require_positive(geometry.area_right, "right area");
  require_positive(geometry.length, "total length");
  if (std::abs(eos_left.area - geometry.area_left) > 1e-12 * geometry.area_left ||
      std::abs(eos_right.area - geometry.area_right) > 1e-12 * geometry.area_right) {
    spec_error("equation-of-state areas do not match the piston geometry");
  }
  const double ell = geometry.length;

  DiscreteSystemSpec spec;
  spec.name = "two_pistons";
  spec.dim = 1;
  spec.entropy_count = 2;
  spec.lagrangian.dim = 1;
  spec.lagrangian.entropy_count = 2;
  spec.lagrangian.value = [=](VecView q, VecView qdot, VecView S) {
    return 0.5 * total_mass * qdot[0] * qdot[0] - eos_left.energy(q[0], S[0]) -
           eos_right.energy(ell - q[0], S[1]);
  };
  spec.lagrangian.partials = [=](VecView q, VecView qdot, VecView S) {
    return LagrangianPartials{
        {-eos_left.d_dx(q[0], S[0]) + eos_right.d_dx(ell - q[0], S[1])},
        {total_mass * qdot[0]},
        {-eos_left.d_dS(q[0], S[0]), -eos_right.d_dS(ell - q[0], S[1])}};
  };
  spec.lagrangian.kinetic_form = [total_mass](VecView, VecView) { return scalar_matrix(total_mass); };
  spec.frictions = {
      [friction_left](VecView, VecView, VecView) { return scalar_matrix(friction_left); },
      [friction_right](VecView, VecView, VecView) { return scalar_matrix(friction_right); }};
  spec.kappa = Eigen::MatrixXd{{0.0, kappa}, {kappa, 0.0}};
  spec.admissible = [ell](const StateDiscrete& x) {
    return x.q.size() == 1 && x.q[0] > 0.0 && x.q[0] < ell;
  };
  spec.sampler = [=](SplitMix64& rng) {
    StateDiscrete x;
    x.q = {ell * rng.uniform(0.3, 0.7)};
    x.p = {rng.uniform(-2.0, 2.0)};
    x.S = {eos_left.reference_entropy + eos_left.entropy_scale * rng.uniform(-0.5, 0.5),
           eos_right.reference_entropy + eos_right.entropy_scale * rng.uniform(-0.5, 0.5)};
    return x;
  };
  return make_discrete_system(std::move(spec));
}

NoSympSystemSpec builtin_chemical(const Eigen::MatrixXd& q_matrix, Vec psi_star,
                                  const Eigen::MatrixXd& lambda, EntropyEnergy f) {
  const auto r = static_cast<Eigen::Index>(psi_star.size());
  if (r == 0) spec_error("chemical system needs at least one reaction");
  if (q_matrix.rows() != r || lambda.rows() != r) spec_error("Q and lambda must be r x r");
  require_spd(q_matrix, "Q");
  // A singular but semidefinite lambda is reported by registration as SingularFrictionMatrix.
  require_symmetric(lambda, "lambda");
  require_psd(lambda, "lambda");
  if (!f.value || !f.derivative) spec_error("entropy energy f is required");

  const Eigen::VectorXd star = as_eigen(psi_star);
  NoSympSystemSpec spec;
  spec.name = "chemical";
  spec.dim = psi_star.size();
  spec.lagrangian = [q_matrix, star, f](VecView q, double S) {
    const Eigen::VectorXd d = as_eigen(q) - star;
    return -(0.5 * d.dot(q_matrix * d) + f.value(S));
  };
  spec.lagrangian_partials = [q_matrix, star, f](VecView q, double S) {
    const Eigen::VectorXd d = as_eigen(q) - star;
    return NoSympPartials{to_vec(-(q_matrix * d)), -f.derivative(S)};
  };
  spec.friction = lambda;
  spec.admissible = [r](const StateSimple& x) {
    return x.q.size() == static_cast<std::size_t>(r) && x.p.empty();
  };
  spec.sampler = [psi_star](SplitMix64& rng) {
    StateSimple x;
    for (double s : psi_star) x.q.push_back(s + rng.uniform(-2.0, 2.0));
    x.S = rng.uniform(-1.0, 1.0);
    return x;
  };
  return make_no_symplectic_system(std::move(spec));
}

LieSystemSpec builtin_rigid_body_thermo(const Eigen::Matrix3d& inertia, const Eigen::Matrix3d& lambda,
                                        EntropyEnergy e) {
  require_spd(inertia, "inertia tensor");
  if (!e.value || !e.derivative) spec_error("internal energy e(s) is required");

  LieSystemSpec spec;
  spec.name = "rigid_body";
  spec.algebra_dim = 3;
  spec.rep_dim = 0;
  spec.structure_constants.assign(27, 0.0);
  // so(3): [e_i, e_j] = eps_ijk e_k.
  auto set = [&spec](std::size_t k, std::size_t i, std::size_t j, double v) {
    spec.structure_constants[(k * 3 + i) * 3 + j] = v;
  };
  set(2, 0, 1, 1.0);
  set(2, 1, 0, -1.0);
  set(0, 1, 2, 1.0);
  set(0, 2, 1, -1.0);
  set(1, 2, 0, 1.0);
  set(1, 0, 2, -1.0);

  const Eigen::Matrix3d inertia_inv = inertia.inverse();
  spec.lagrangian = [inertia, e](VecView xi, VecView, double s) {
    const Eigen::Vector3d w(xi[0], xi[1], xi[2]);
    return 0.5 * w.dot(inertia * w) - e.value(s);
  };
  spec.lagrangian_partials = [inertia, e](VecView xi, VecView, double s) {
    const Eigen::Vector3d w(xi[0], xi[1], xi[2]);
    const Eigen::Vector3d iw = inertia * w;
    return LiePartials{{iw(0), iw(1), iw(2)}, {}, -e.derivative(s)};
  };
  spec.inverse_legendre = [inertia_inv](VecView mu, VecView, double) {
    const Eigen::Vector3d w = inertia_inv * Eigen::Vector3d(mu[0], mu[1], mu[2]);
    return Vec{w(0), w(1), w(2)};
  };
  spec.friction = lambda;
  spec.admissible = [](const StateLie& x) { return x.mu.size() == 3 && x.a.empty(); };
  spec.sampler = [](SplitMix64& rng) {
    StateLie x;
    x.mu = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    x.s = rng.uniform(-0.5, 0.5);
    return x;
  };
  return make_lie_system(std::move(spec));
}

SimpleSystemSpec builtin_damped_oscillator(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness,
                                           const Eigen::MatrixXd& lambda, EntropyEnergy f,
                                           bool dissipative) {
  const Eigen::Index d = mass.rows();
  if (d == 0) spec_error("oscillator needs dim >= 1");
  if (stiffness.rows() != d || stiffness.cols() != d || lambda.rows() != d || lambda.cols() != d) {
    spec_error("mass, stiffness and friction matrices must have equal size");
  }
  require_spd(mass, "mass matrix");
  require_symmetric(stiffness, "stiffness matrix");
  if (!f.value || !f.derivative) spec_error("entropy energy f is required");

  SimpleSystemSpec spec;
  spec.name = "oscillator";
  spec.dim = static_cast<std::size_t>(d);
  spec.dissipative = dissipative;
  spec.lagrangian.dim = spec.dim;
  spec.lagrangian.entropy_count = 1;
  spec.lagrangian.value = [mass, stiffness, f](VecView q, VecView qdot, VecView S) {
    const auto qv = as_eigen(q);
    const auto vv = as_eigen(qdot);
    return 0.5 * vv.dot(mass * vv) - 0.5 * qv.dot(stiffness * qv) - f.value(S[0]);
  };
  spec.lagrangian.partials = [mass, stiffness, f](VecView q, VecView qdot, VecView S) {
    return LagrangianPartials{to_vec(-(stiffness * as_eigen(q))), to_vec(mass * as_eigen(qdot)),
                              {-f.derivative(S[0])}};
  };
  spec.lagrangian.kinetic_form = [mass](VecView, VecView) { return mass; };
  spec.friction = [lambda](VecView, VecView, VecView) { return lambda; };
  spec.admissible = [d](const StateSimple& x) {
    return x.q.size() == static_cast<std::size_t>(d) && x.p.size() == static_cast<std::size_t>(d);
  };
  spec.sampler = [d](SplitMix64& rng) {
    StateSimple x;
    for (Eigen::Index i = 0; i < d; ++i) x.q.push_back(rng.uniform(-2.0, 2.0));
    for (Eigen::Index i = 0; i < d; ++i) x.p.push_back(rng.uniform(-2.0, 2.0));
    x.S = rng.uniform(-0.5, 0.5);
    return x;
  };
  return make_simple_system(std::move(spec));
}

}  // namespace metriplectic
