/*
 * Copyright 2026 The lattice-relay Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>

#include "relay/core_model.hpp"

namespace relay {
namespace {

const CostParams kQuad{0.1, 0.01, 2.0};
const CostParams kCubic{0.1, 0.01, 3.0};

TEST(HopCost, ValuesAtKnownDistances) {
  EXPECT_DOUBLE_EQ(hop_cost(0.0, kQuad), 0.1);
  EXPECT_DOUBLE_EQ(hop_cost(1.0, kQuad), 0.11);
  EXPECT_DOUBLE_EQ(hop_cost(2.0, kCubic), 0.18);
}

TEST(HopCost, RejectsNegativeDistance) {
  EXPECT_THROW(hop_cost(-1.0, kQuad), ValidationError);
}

TEST(HopCost, IncreasingAndConvexInDistance) {
  for (double eta : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    const CostParams c{0.1, 0.01, eta};
    for (double r = 0.5; r < 40.0; r += 0.5) {
      const double lo = hop_cost(r - 0.5, c);
      const double mid = hop_cost(r, c);
      const double hi = hop_cost(r + 0.5, c);
      EXPECT_LT(lo, mid);
      EXPECT_GE(lo + hi, 2.0 * mid - 1e-12 * mid);
    }
  }
}

TEST(HopCostPoint, KnownPoints) {
  const CostModel cost(kQuad);
  EXPECT_DOUBLE_EQ(hop_cost_point({0, 0}, cost), 0.1);
  EXPECT_DOUBLE_EQ(hop_cost_point({3, 4}, cost), 0.35);
  EXPECT_DOUBLE_EQ(hop_cost_point({1, 1}, cost), 0.12);
}

TEST(HopCostPoint, SymmetricExactly) {
  for (double eta : {1.0, 2.0, 2.5, 3.0}) {
    const CostModel cost(CostParams{0.1, 0.01, eta});
    for (std::int64_t m = 0; m < 30; ++m) {
      for (std::int64_t n = 0; n < 30; ++n) {
        EXPECT_EQ(cost.at(m, n), cost.at(n, m));
      }
    }
  }
}

TEST(HopDeltas, OriginAndAxis) {
  const CostModel cost(kQuad);
  const auto at_origin = hop_deltas({0, 0}, 0.5, cost);
  EXPECT_EQ(at_origin.east, 0.01);
  EXPECT_EQ(at_origin.north, 0.01);
  EXPECT_EQ(at_origin.mixed, 0.01);
  const auto east = hop_deltas({2, 0}, 1.0, cost);
  EXPECT_DOUBLE_EQ(east.mixed, 0.05);
  EXPECT_EQ(east.mixed, east.east);
}

TEST(HopDeltas, QuadraticClosedForm) {
  // For eta = 2: D1 = gamma (2m + 1), D2 = gamma (2n + 1).
  const CostModel cost(kQuad);
  for (std::int64_t m = 0; m < 50; ++m) {
    for (std::int64_t n = 0; n < 50; n += 7) {
      const auto d = hop_deltas({m, n}, 0.3, cost);
      EXPECT_NEAR(d.east, 0.01 * (2 * m + 1), 1e-13);
      EXPECT_NEAR(d.north, 0.01 * (2 * n + 1), 1e-13);
      EXPECT_NEAR(d.mixed, 0.3 * d.east + 0.7 * d.north, 1e-13);
    }
  }
}

TEST(HopDeltas, SwapSymmetry) {
  for (double eta : {2.0, 3.0}) {
    const CostModel cost(CostParams{0.1, 0.01, eta});
    EXPECT_EQ(hop_deltas({5, 3}, 0.4, cost).east,
              hop_deltas({3, 5}, 0.4, cost).north);
  }
}

TEST(HopDeltas, PositiveAndNonDecreasing) {
  // Needs eta >= 2; a linear cost has increments that shrink off the axis.
  for (double eta : {2.0, 2.5, 3.0}) {
    const CostModel cost(CostParams{0.1, 0.01, eta});
    for (std::int64_t m = 0; m < 25; ++m) {
      for (std::int64_t n = 0; n < 25; ++n) {
        const auto here = hop_deltas({m, n}, 0.5, cost);
        const auto right = hop_deltas({m + 1, n}, 0.5, cost);
        const auto up = hop_deltas({m, n + 1}, 0.5, cost);
        const double slack = 1e-12 * cost.at(m + 1, n + 1);
        EXPECT_GT(here.east, 0.0);
        EXPECT_GT(here.north, 0.0);
        EXPECT_GE(right.east, here.east - slack);
        EXPECT_GE(up.east, here.east - slack);
        EXPECT_GE(right.north, here.north - slack);
        EXPECT_GE(up.north, here.north - slack);
      }
    }
  }
}

TEST(ValidateCostModel, QuadraticPasses) {
  const auto report = validate_cost_model(CostModel(kQuad), 50);
  EXPECT_TRUE(report.all_passed());
  EXPECT_EQ(report.checks.size(), 4u);
}

TEST(ValidateCostModel, LinearFailsGrowthOnly) {
  const auto report = validate_cost_model(CostModel(CostParams{0.1, 0.01, 1.0}), 50);
  EXPECT_FALSE(report.all_passed());
  ASSERT_NE(report.find("C3_increment_growth"), nullptr);
  EXPECT_FALSE(report.find("C3_increment_growth")->passed);
  EXPECT_TRUE(report.find("C1_positive_at_zero")->passed);
  EXPECT_TRUE(report.find("C2_convex_along_lattice")->passed);
}

TEST(ValidateCostModel, CubicPasses) {
  EXPECT_TRUE(validate_cost_model(CostModel(kCubic), 20).all_passed());
}

TEST(ValidateCostModel, RejectsSmallExtent) {
  EXPECT_THROW(validate_cost_model(CostModel(kQuad), 1), ValidationError);
}

class ConcaveCost : public HopCost {
 public:
  double at_distance(double r) const override { return 0.1 + std::sqrt(r); }
  std::string describe() const override { return "sqrt"; }
};

class ZeroAtOrigin : public HopCost {
 public:
  double at_distance(double r) const override { return r * r; }
  std::string describe() const override { return "r^2"; }
};

TEST(CostModel, CustomCostsAreChecked) {
  EXPECT_THROW(CostModel::custom(std::make_shared<ConcaveCost>()), CostModelError);
  EXPECT_THROW(CostModel::custom(std::make_shared<ZeroAtOrigin>()), CostModelError);
  EXPECT_THROW(CostModel::custom(nullptr), ValidationError);
}

class ShiftedQuartic : public HopCost {
 public:
  double at_distance(double r) const override { return 0.2 + 1e-4 * std::pow(r, 4); }
  std::string describe() const override { return "quartic"; }
};

TEST(CostModel, CustomConvexCostAccepted) {
  const auto model = CostModel::custom(std::make_shared<ShiftedQuartic>());
  EXPECT_EQ(model.power_params(), nullptr);
  EXPECT_NEAR(model.at(1, 1), 0.2 + 4e-4, 1e-15);
}

TEST(Params, Validation) {
  EXPECT_THROW(PathParams(0.0, 0.5), ValidationError);
  EXPECT_THROW(PathParams(1.5, 0.5), ValidationError);
  EXPECT_THROW(PathParams(0.5, -0.1), ValidationError);
  EXPECT_NO_THROW(PathParams(1.0, 0.5));
  EXPECT_THROW(PathParams(1.0, 0.5).require_solvable(), ValidationError);
  EXPECT_THROW(CostParams(0.0, 0.01, 2.0), ValidationError);
  EXPECT_THROW(CostParams(0.1, 0.0, 2.0), ValidationError);
  EXPECT_THROW(CostParams(0.1, 0.01, 0.5), ValidationError);
  EXPECT_THROW(RelayPrice(-1.0), ValidationError);
  try {
    PathParams(1.5, 0.5);
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "p");
  }
}

}  // namespace
}  // namespace relay
