#include <gtest/gtest.h>

#include <cmath>

#include "metriplectic/error.hpp"
#include "metriplectic/observable.hpp"
#include "metriplectic/random.hpp"
#include "metriplectic/verify.hpp"

namespace mp = metriplectic;

namespace {

mp::Observable kinetic() {
  return mp::Observable(
      mp::StateClass::Simple,
      [](const mp::State& xs) {
        const auto& x = std::get<mp::StateSimple>(xs);
        double acc = 0.0;
        for (double p : x.p) acc += p * p;
        return 0.5 * acc;
      },
      [](const mp::State& xs) {
        const auto& x = std::get<mp::StateSimple>(xs);
        mp::Gradient g(mp::layout_of(xs));
        auto gp = g.p();
        for (std::size_t i = 0; i < x.p.size(); ++i) gp[i] = x.p[i];
        return g;
      },
      "p.p/2");
}

}  // namespace

TEST(Observable, CoordinateProjection) {
  const mp::State x = mp::StateSimple{{3.0, 5.0}, {0.0, 0.0}, 0.0};
  EXPECT_EQ(mp::eval(mp::coordinate(mp::StateClass::Simple, 0), x), 3.0);
}

TEST(Observable, ConstantValue) {
  const mp::State x = mp::StateSimple{{3.0}, {1.0}, 2.0};
  EXPECT_EQ(mp::eval(mp::constant(mp::StateClass::Simple, 7.0), x), 7.0);
  const auto g = mp::grad(mp::constant(mp::StateClass::Simple, 7.0), x);
  for (double v : g.values()) EXPECT_EQ(v, 0.0);
}

TEST(Observable, QuadraticForm) {
  const mp::State x = mp::StateSimple{{0.0, 0.0}, {3.0, 4.0}, 0.0};
  EXPECT_DOUBLE_EQ(mp::eval(kinetic(), x), 12.5);
}

TEST(Observable, SquareOfCoordinateGradient) {
  const mp::Observable sq(mp::StateClass::Simple, [](const mp::State& xs) {
    const double q = std::get<mp::StateSimple>(xs).q[0];
    return q * q;
  });
  const mp::State x = mp::StateSimple{{3.0, 1.0}, {0.5, 0.5}, 1.0};
  const auto g = mp::grad(sq, x);
  EXPECT_NEAR(g[0], 6.0, 1e-8);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i], 0.0, 1e-9);
}

TEST(Observable, EntropyCoordinateGradient) {
  const mp::State x = mp::StateSimple{{1.0, 2.0}, {3.0, 4.0}, 5.0};
  const auto g = mp::grad(mp::coordinate(mp::StateClass::Simple, 4, "S"), x);
  EXPECT_EQ(std::vector<double>(g.values().begin(), g.values().end()),
            (std::vector<double>{0, 0, 0, 0, 1}));
  EXPECT_EQ(g.entropy(), 1.0);
}

TEST(Observable, FiniteDifferenceMatchesHandGradient) {
  const mp::Observable f(mp::StateClass::Simple, [](const mp::State& xs) {
    const auto& x = std::get<mp::StateSimple>(xs);
    return x.p[0] * x.p[1] + x.S * x.q[0];
  });
  const mp::State x = mp::StateSimple{{2.0, 0.0}, {1.0, 4.0}, 3.0};
  const auto g = mp::grad(f, x);
  const std::vector<double> expected = {3, 0, 4, 1, 2};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(g[i], expected[i], 1e-6 * std::max(1.0, std::abs(expected[i]))) << i;
  }
}

TEST(Observable, ArityMismatch) {
  const mp::State x = mp::StateLie{{1.0, 0.0, 0.0}, {}, 0.0};
  try {
    (void)mp::eval(kinetic(), x);
    FAIL();
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::ArityMismatch);
  }
}

TEST(Observable, NonFiniteGradientNamesCoordinate) {
  const mp::Observable f(
      mp::StateClass::Simple, [](const mp::State&) { return 0.0; },
      [](const mp::State& xs) {
        mp::Gradient g(mp::layout_of(xs));
        g[1] = std::numeric_limits<double>::infinity();
        return g;
      });
  const mp::State x = mp::StateSimple{{1.0}, {1.0}, 0.0};
  try {
    (void)mp::grad(f, x);
    FAIL();
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::NonFiniteValue);
    EXPECT_EQ(e.index().value_or(99), 1u);
  }
}

TEST(Observable, NamedAccessorsRejectWrongClass) {
  mp::Gradient g(mp::Layout::lie(3, 0));
  EXPECT_THROW((void)g.q(), mp::Error);
  EXPECT_EQ(g.mu().size(), 3u);
}

TEST(Observable, FdStepRule) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon());
  EXPECT_DOUBLE_EQ(mp::fd_step(0.5), h);
  EXPECT_DOUBLE_EQ(mp::fd_step(-4.0), 4.0 * h);
}

// 100 random polynomials x 20 states: FD vs analytic gradient.
TEST(ObservableProperty, FiniteDifferenceAgreesWithAnalytic) {
  const mp::Layout layout = mp::Layout::simple(2);
  mp::SplitMix64 rng(2024);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const auto obs = mp::random_observable(rng.next(), layout, 3);
    for (int s = 0; s < 20; ++s) {
      const mp::State x = mp::StateSimple{{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)},
                                          {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)},
                                          rng.uniform(-1.5, 1.5)};
      const auto exact = mp::grad(obs, x);
      const auto approx = mp::fd_gradient(obs, x);
      double scale = 1.0;
      for (double v : exact.values()) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < exact.size(); ++i) {
        worst = std::max(worst, std::abs(exact[i] - approx[i]) / scale);
      }
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(ObservableProperty, PureAndBitIdentical) {
  const auto obs = mp::random_observable(99, mp::Layout::simple(2), 3).without_gradient();
  const mp::State x = mp::StateSimple{{0.3, -0.7}, {1.1, 0.2}, 0.4};
  const auto a = mp::grad(obs, x);
  const auto b = mp::grad(obs, x);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_EQ(mp::eval(obs, x), mp::eval(obs, x));
}
