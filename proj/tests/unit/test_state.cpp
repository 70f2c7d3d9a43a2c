#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "metriplectic/error.hpp"
#include "metriplectic/state.hpp"

namespace mp = metriplectic;

TEST(Layout, BlockSizesPerClass) {
  EXPECT_EQ(mp::Layout::simple(2).size(), 5u);
  EXPECT_EQ(mp::Layout::simple(3, false).size(), 4u);
  EXPECT_EQ(mp::Layout::discrete(1, 2).size(), 4u);
  EXPECT_EQ(mp::Layout::lie(3, 2).size(), 6u);
  EXPECT_EQ(mp::Layout::field(8).size(), 24u);
  EXPECT_EQ(mp::Layout::field(8).offset(2), 16u);
}

TEST(State, FlattenRoundTripsEveryClass) {
  const std::vector<mp::State> states = {
      mp::StateSimple{{1.0, 2.0}, {3.0, 4.0}, 5.0},
      mp::StateSimple{{1.0, 2.0}, {}, 5.0},
      mp::StateDiscrete{{1.0}, {2.0}, {3.0, 4.0}},
      mp::StateLie{{1.0, 2.0, 3.0}, {4.0}, 5.0},
      mp::StateField1D{{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}},
  };
  for (const auto& x : states) {
    const auto flat = mp::flatten(x);
    const auto back = mp::unflatten(mp::layout_of(x), flat);
    EXPECT_EQ(mp::flatten(back), flat);
    EXPECT_EQ(mp::state_class(back), mp::state_class(x));
  }
}

TEST(State, FlattenOrderIsDocumented) {
  const mp::State x = mp::StateSimple{{1.0, 2.0}, {3.0, 4.0}, 5.0};
  EXPECT_EQ(mp::flatten(x), (std::vector<double>{1, 2, 3, 4, 5}));
  const mp::State f = mp::StateField1D{{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}};
  EXPECT_EQ(mp::flatten(f)[4], 5.0);
  EXPECT_EQ(mp::flatten(f)[8], 9.0);
}

TEST(State, UnflattenRejectsWrongLength) {
  const std::vector<double> v = {1, 2, 3};
  try {
    (void)mp::unflatten(mp::Layout::simple(2), v);
    FAIL() << "expected DimensionMismatch";
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::DimensionMismatch);
  }
}

TEST(State, CoordinateNames) {
  const auto names = mp::coordinate_names(mp::Layout::discrete(1, 2));
  EXPECT_EQ(names, (std::vector<std::string>{"q_1", "p_1", "S_1", "S_2"}));
  const auto simple = mp::coordinate_names(mp::Layout::simple(1));
  EXPECT_EQ(simple, (std::vector<std::string>{"q_1", "p_1", "S"}));
  const auto field = mp::coordinate_names(mp::Layout::field(4));
  EXPECT_EQ(field.front(), "m_1");
  EXPECT_EQ(field[4], "rho_1");
  EXPECT_EQ(field.back(), "s_4");
}

TEST(State, ValidateFlagsNonFiniteCoordinate) {
  const mp::State x = mp::StateSimple{{1.0}, {std::numeric_limits<double>::quiet_NaN()}, 0.0};
  try {
    mp::validate(x);
    FAIL() << "expected NonFiniteValue";
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::NonFiniteValue);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(State, ValidateFlagsMismatchedBlocks) {
  const mp::State x = mp::StateDiscrete{{1.0}, {1.0, 2.0}, {0.0}};
  EXPECT_THROW(mp::validate(x), mp::Error);
}

TEST(State, ValidateFlagsNonpositiveDensityCell) {
  const mp::State x = mp::StateField1D{{0, 0, 0, 0}, {1, 1, -1, 1}, {0, 0, 0, 0}};
  try {
    mp::validate(x);
    FAIL() << "expected DomainViolation";
  } catch (const mp::Error& e) {
    EXPECT_EQ(e.code(), mp::ErrorCode::DomainViolation);
    EXPECT_EQ(e.index().value_or(99), 2u);
  }
}

TEST(Error, WhatCarriesCodeAndIndex) {
  const mp::Error e(mp::ErrorCode::DegenerateK, "K is zero", 3);
  EXPECT_NE(std::string(e.what()).find("DegenerateK"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
}
