#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fixtures.hpp"
#include "metriplectic/error.hpp"
#include "metriplectic/systems.hpp"

namespace mp = metriplectic;
namespace fx = metriplectic::testing;

namespace {

template <typename Fn>
mp::ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const mp::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return mp::ErrorCode::ConfigError;
}

}  // namespace

TEST(IdealGas, EquationOfState) {
  mp::IdealGasParams params;
  params.n_moles = 2.0;
  params.c_v = 2.5;
  params.gas_constant = 8.314;
  params.area = 0.5;
  params.U0 = 10.0;
  const auto gas = mp::ideal_gas_energy(params);
  for (double x : {0.5, 1.0, 3.0}) {
    for (double S : {-1.0, 0.0, 2.0}) {
      const double pv = gas.pressure(x, S) * params.area * x;
      const double nrt = params.n_moles * params.gas_constant * gas.temperature(x, S);
      EXPECT_NEAR(pv, nrt, 1e-12 * nrt);
    }
  }
}

TEST(IdealGas, ReferenceTemperature) {
  const auto gas = fx::warm_gas();
  EXPECT_DOUBLE_EQ(gas.energy(1.0, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(gas.temperature(1.0, 0.0), 2.0);
}

TEST(EntropyEnergy, ExponentialAndLinear) {
  const auto e = mp::exponential_entropy_energy(2.0, 3.0);
  EXPECT_DOUBLE_EQ(e.derivative(0.0), 2.0);
  EXPECT_NEAR(e.derivative(3.0), 2.0 * std::exp(1.0), 1e-14);
  const auto l = mp::linear_entropy_energy(4.0);
  EXPECT_DOUBLE_EQ(l.value(2.0), 8.0);
  EXPECT_DOUBLE_EQ(l.derivative(-5.0), 4.0);
}

TEST(Piston, FrictionForceAndPower) {
  const auto spec = fx::unit_piston(1.0);
  const auto x = fx::piston_state(1.0, 3.0, 0.0);
  EXPECT_DOUBLE_EQ(mp::friction_force(spec, x)[0], -3.0);
  EXPECT_DOUBLE_EQ(mp::dissipated_power(spec, x), 9.0);
  EXPECT_DOUBLE_EQ(mp::friction_matrix(spec, x)(0, 0), 1.0);
}

TEST(Piston, HamiltonianIsKineticPlusInternal) {
  const auto spec = fx::unit_piston();
  const mp::Vec q = {1.0}, p = {3.0}, S = {0.0};
  EXPECT_NEAR(spec.hamiltonian.value(q, p, S), 4.5 + 3.0, 1e-12);
  EXPECT_NEAR(mp::temperature(spec.hamiltonian, q, p, S), 2.0, 1e-12);
}

TEST(Registration, RejectsAsymmetricFriction) {
  Eigen::Matrix2d lambda;
  lambda << 1.0, 0.5, 0.0, 1.0;
  EXPECT_EQ(error_code_of([&] {
              (void)mp::builtin_damped_oscillator(Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity(),
                                                  lambda, mp::linear_entropy_energy());
            }),
            mp::ErrorCode::SpecError);
}

TEST(Registration, RejectsIndefiniteFrictionWhenDissipative) {
  const Eigen::Matrix2d lambda = Eigen::Vector2d(1.0, -0.5).asDiagonal();
  EXPECT_EQ(error_code_of([&] {
              (void)mp::builtin_damped_oscillator(Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity(),
                                                  lambda, mp::linear_entropy_energy());
            }),
            mp::ErrorCode::SpecError);
  EXPECT_NO_THROW((void)mp::builtin_damped_oscillator(Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity(),
                                                      lambda, mp::linear_entropy_energy(), false));
}

TEST(Registration, RejectsAsymmetricKappa) {
  auto spec = fx::two_pistons(1.0);
  spec.kappa(0, 1) = 2.0;
  EXPECT_EQ(error_code_of([&] { (void)mp::make_discrete_system(spec); }), mp::ErrorCode::SpecError);
}

TEST(Registration, RejectsNegativeKappa) {
  EXPECT_EQ(error_code_of([] { (void)fx::two_pistons(-1.0); }), mp::ErrorCode::SpecError);
}

TEST(Registration, SingularChemicalFriction) {
  Eigen::Matrix2d lambda;
  lambda << 1.0, 1.0, 1.0, 1.0;
  EXPECT_EQ(error_code_of([&] {
              (void)mp::builtin_chemical(Eigen::Matrix2d::Identity(), {0.0, 0.0}, lambda,
                                         mp::linear_entropy_energy());
            }),
            mp::ErrorCode::SingularFrictionMatrix);
}

TEST(Registration, ChemicalCachesInverse) {
  const auto spec = fx::scalar_chemical();
  EXPECT_DOUBLE_EQ(spec.friction_inverse(0, 0), 0.5);
}

TEST(Registration, LieJacobiViolationRejected) {
  auto spec = fx::rigid_body();
  // [e_1, e_2] = e_0 + e_1 / 2 breaks the Jacobi identity.
  spec.structure_constants[(1 * 3 + 1) * 3 + 2] = 0.5;
  spec.structure_constants[(1 * 3 + 2) * 3 + 1] = -0.5;
  EXPECT_EQ(error_code_of([&] { (void)mp::make_lie_system(spec); }), mp::ErrorCode::SpecError);
}

TEST(Registration, LieAntisymmetryViolationRejected) {
  auto spec = fx::rigid_body();
  spec.structure_constants[(0 * 3 + 2) * 3 + 1] = 1.0;
  EXPECT_EQ(error_code_of([&] { (void)mp::make_lie_system(spec); }), mp::ErrorCode::SpecError);
}

TEST(HeatFlux, MatrixOfTwoSubsystems) {
  Eigen::Matrix2d kappa;
  kappa << 0.0, 3.0, 3.0, 0.0;
  Eigen::Matrix2d expected;
  expected << 3.0, -3.0, -3.0, 3.0;
  EXPECT_EQ(mp::heat_flux_matrix(kappa), expected);
  EXPECT_EQ(mp::heat_flux_matrix(fx::two_pistons(3.0)), expected);
}

TEST(TwoPistons, ReferenceTemperatures) {
  const auto spec = fx::two_pistons(3.0);
  const mp::Vec q = {1.0}, p = {0.0}, S = {0.0, 0.0};
  const auto T = mp::temperatures(spec.hamiltonian, q, p, S);
  EXPECT_NEAR(T[0], 2.0, 1e-12);
  EXPECT_NEAR(T[1], 1.0, 1e-12);
}

TEST(RigidBody, CommutatorIsCrossProduct) {
  const auto spec = fx::rigid_body();
  const mp::Vec a = {1.0, 2.0, 3.0}, b = {-1.0, 0.5, 2.0};
  const auto c = mp::commutator(spec, a, b);
  const Eigen::Vector3d expected = Eigen::Vector3d(1, 2, 3).cross(Eigen::Vector3d(-1, 0.5, 2));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(c[static_cast<std::size_t>(i)], expected(i), 1e-15);
}

TEST(RigidBody, HamiltonianPartials) {
  const auto spec = fx::rigid_body();
  const mp::StateLie x{{0.0, 1.0, 1.0}, {}, 0.25};
  const auto parts = mp::lie_hamiltonian_partials(spec, x);
  EXPECT_NEAR(parts.dmu[1], 0.5, 1e-14);
  EXPECT_NEAR(parts.dmu[2], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(parts.ds, 1.0, 1e-14);
  EXPECT_NEAR(mp::lie_hamiltonian(spec, x), 0.25 + 1.0 / 6.0 + 0.25, 1e-14);
}

TEST(Samplers, StatesAreAdmissible) {
  const auto piston = fx::unit_piston();
  const auto pair = fx::two_pistons(1.0);
  mp::SplitMix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(piston.admissible(piston.sampler(rng)));
    EXPECT_TRUE(pair.admissible(pair.sampler(rng)));
  }
}
