#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "metriplectic/error.hpp"
#include "metriplectic/legendre.hpp"
#include "metriplectic/random.hpp"

namespace mp = metriplectic;

namespace {

// L = qdot^T M qdot / 2 - q^T q / 2 + S
mp::LagrangianSide quadratic(const Eigen::MatrixXd& mass, bool declare_kinetic_form) {
  mp::LagrangianSide ls;
  ls.dim = static_cast<std::size_t>(mass.rows());
  ls.value = [mass](mp::VecView q, mp::VecView qd, mp::VecView S) {
    const auto v = mp::as_eigen(qd);
    const auto x = mp::as_eigen(q);
    return 0.5 * v.dot(mass * v) - 0.5 * x.squaredNorm() + S[0];
  };
  ls.partials = [mass](mp::VecView q, mp::VecView qd, mp::VecView) {
    mp::LagrangianPartials out;
    out.dq = mp::Vec(q.begin(), q.end());
    for (double& v : out.dq) v = -v;
    out.dqdot = mp::to_vec(mass * mp::as_eigen(qd));
    out.dS = {1.0};
    return out;
  };
  if (declare_kinetic_form) {
    ls.kinetic_form = [mass](mp::VecView, mp::VecView) { return mass; };
  }
  return ls;
}

// L = sum(qdot^4 / 4 + qdot^2 / 2): convex but not quadratic.
mp::LagrangianSide quartic(std::size_t dim) {
  mp::LagrangianSide ls;
  ls.dim = dim;
  ls.value = [](mp::VecView, mp::VecView qd, mp::VecView) {
    double acc = 0.0;
    for (double v : qd) acc += v * v * v * v / 4.0 + v * v / 2.0;
    return acc;
  };
  ls.partials = [dim](mp::VecView, mp::VecView qd, mp::VecView) {
    mp::LagrangianPartials out;
    out.dq.assign(dim, 0.0);
    for (double v : qd) out.dqdot.push_back(v * v * v + v);
    out.dS = {0.0};
    return out;
  };
  return ls;
}

const mp::Vec kQ = {0.3, -0.4};
const mp::Vec kS = {0.0};

}  // namespace

TEST(Legendre, MomentumOfDiagonalKineticForm) {
  const auto ls = quadratic(Eigen::Vector2d(2.0, 5.0).asDiagonal(), true);
  const mp::Vec qd = {1.0, 1.0};
  EXPECT_EQ(mp::momentum(ls, kQ, qd, kS), (mp::Vec{2.0, 5.0}));
}

TEST(Legendre, RoundTripWithKineticForm) {
  Eigen::Matrix2d m;
  m << 2.0, 0.5, 0.5, 1.0;
  const auto ls = quadratic(m, true);
  const mp::Vec qd0 = {0.7, -1.2};
  const auto p = mp::momentum(ls, kQ, qd0, kS);
  const auto qd = mp::invert_legendre(ls, kQ, p, kS);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(qd[i], qd0[i], 1e-10);
}

TEST(Legendre, RoundTripWithNewton) {
  const auto ls = quartic(2);
  const mp::Vec qd0 = {0.7, -1.2};
  const auto p = mp::momentum(ls, kQ, qd0, kS);
  const auto qd = mp::invert_legendre(ls, kQ, p, kS);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(qd[i], qd0[i], 1e-10);
}

TEST(Legendre, DegenerateKineticFormFails) {
  Eigen::Matrix2d m;
  m << 1.0, 0.0, 0.0, 0.0;
  const auto ls = quadratic(m, true);
  try {
    (void)mp::invert_legendre(ls, kQ, mp::Vec{1.0, 1.0}, kS);
    FAIL();
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::LegendreInversionFailure);
  }
}

TEST(Legendre, DegenerateHessianFailsOnNewtonPath) {
  Eigen::Matrix2d m;
  m << 1.0, 0.0, 0.0, 0.0;
  const auto ls = quadratic(m, false);
  EXPECT_THROW((void)mp::invert_legendre(ls, kQ, mp::Vec{1.0, 1.0}, kS), mp::Error);
}

TEST(Legendre, HamiltonianPartialsAndTemperature) {
  Eigen::Matrix2d m;
  m << 2.0, 0.5, 0.5, 1.0;
  const auto ls = quadratic(m, true);
  const auto hs = mp::to_hamiltonian(ls);
  const mp::Vec qd0 = {0.7, -1.2};
  const auto p = mp::momentum(ls, kQ, qd0, kS);
  const auto parts = hs.partials(kQ, p, kS);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(parts.dp[i], qd0[i], 1e-12);
    EXPECT_NEAR(parts.dq[i], kQ[i], 1e-12);
  }
  EXPECT_DOUBLE_EQ(parts.dS[0], -1.0);
  EXPECT_DOUBLE_EQ(mp::temperature(hs, kQ, p, kS), -1.0);
  // H = <p, qdot> - L = qdot^T M qdot / 2 + q^T q / 2 - S
  const double expected = 0.5 * mp::as_eigen(qd0).dot(m * mp::as_eigen(qd0)) + 0.5 * (0.09 + 0.16);
  EXPECT_NEAR(hs.value(kQ, p, kS), expected, 1e-12);
}

// 100 random SPD kinetic forms: qdot(p(qdot)) reproduces qdot.
TEST(LegendreProperty, RandomSpdRoundTrip) {
  mp::SplitMix64 rng(7);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    const Eigen::MatrixXd m = a * a.transpose() + 0.5 * Eigen::Matrix3d::Identity();
    const bool declared = (c % 2) == 0;
    const auto ls = quadratic(m, declared);
    const mp::Vec q = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const mp::Vec qd0 = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const auto qd = mp::invert_legendre(ls, q, mp::momentum(ls, q, qd0, kS), kS);
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(qd[i] - qd0[i]));
  }
  EXPECT_LE(worst, 1e-9);
}
