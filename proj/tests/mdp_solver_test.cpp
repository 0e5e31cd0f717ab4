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
#include <limits>
#include <map>
#include <tuple>

#include "oracles.hpp"
#include "relay/mdp_solver.hpp"

namespace relay {
namespace {

const CostModel kQuad(CostParams{0.1, 0.01, 2.0});

double quad_d(double r) { return 0.1 + 0.01 * r * r; }

TEST(FiniteHorizon, OneStepAtOrigin) {
  const auto v = finite_horizon_values(1, PathParams(0.02, 0.5), kQuad, 41.0, 5, 5);
  EXPECT_DOUBLE_EQ(v.at({0, 0}), 0.11);
}

TEST(FiniteHorizon, OneStepPlacesFarOut) {
  const PathParams pp(0.02, 0.5);
  const double lambda = 0.5;
  const auto v = finite_horizon_values(1, pp, kQuad, lambda, 60, 60);
  for (std::int64_t m = 0; m <= 60; m += 3) {
    for (std::int64_t n = 0; n <= 60; n += 5) {
      const double dq = oracle::expected_increment(m, n, 0.5, 0.1, 0.01, 2.0);
      const double d = oracle::cost(m, n, 0.1, 0.01, 2.0);
      // H_1 = min(lambda + d(1), D_q).
      EXPECT_NEAR(v.at({m, n}) - d, std::min(lambda + 0.11, dq), 1e-12);
      if (dq > lambda + 0.11) {
        EXPECT_NEAR(v.at({m, n}), lambda + d + 0.11, 1e-12);
      }
    }
  }
}

TEST(FiniteHorizon, RejectsBadInput) {
  EXPECT_THROW(finite_horizon_values(0, PathParams(0.5, 0.5), kQuad, 1.0, 5, 5),
               ValidationError);
  EXPECT_THROW(finite_horizon_values(2, PathParams(0.5, 0.5), kQuad, 1.0, 0, 5),
               ValidationError);
  const auto v = finite_horizon_values(2, PathParams(0.5, 0.5), kQuad, 1.0, 3, 3);
  EXPECT_THROW(v.at({4, 0}), ValidationError);
}

// A direct recursion of J_K on demand, memoized per (k, m, n).
class HorizonOracle {
 public:
  HorizonOracle(double p, double q, double lambda) : p_(p), q_(q), lambda_(lambda) {}
  double j(int k, std::int64_t m, std::int64_t n) {
    const auto key = std::make_tuple(k, m, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto d = [](std::int64_t a, std::int64_t b) { return oracle::cost(a, b, 0.1, 0.01, 2.0); };
    double value;
    if (k == 1) {
      value = std::min(lambda_ + d(m, n) + d(1, 0), q_ * d(m + 1, n) + (1 - q_) * d(m, n + 1));
    } else {
      const double place = lambda_ + d(m, n) + (1 - p_) * q_ * j(k - 1, 1, 0) +
                           p_ * q_ * d(1, 0) + (1 - p_) * (1 - q_) * j(k - 1, 0, 1) +
                           p_ * (1 - q_) * d(1, 0);
      const double skip = (1 - p_) * q_ * j(k - 1, m + 1, n) + p_ * q_ * d(m + 1, n) +
                          (1 - p_) * (1 - q_) * j(k - 1, m, n + 1) +
                          p_ * (1 - q_) * d(m, n + 1);
      value = std::min(place, skip);
    }
    memo_[key] = value;
    return value;
  }

 private:
  double p_, q_, lambda_;
  std::map<std::tuple<int, std::int64_t, std::int64_t>, double> memo_;
};

TEST(FiniteHorizon, MatchesDirectRecursion) {
  for (double q : {0.3, 0.5, 1.0}) {
    HorizonOracle ref(0.1, q, 2.0);
    const auto v = finite_horizon_values(6, PathParams(0.1, q), kQuad, 2.0, 8, 8);
    for (std::int64_t m = 0; m <= 8; ++m) {
      for (std::int64_t n = 0; n <= 8; ++n) {
        EXPECT_NEAR(v.at({m, n}), ref.j(6, m, n), 1e-12);
      }
    }
  }
}

void expect_h_monotone(const ValueTable& v, const CostModel& cost) {
  for (std::size_t n = 0; n < v.rows.size(); ++n) {
    for (std::size_t m = 0; m < v.rows[n].size(); ++m) {
      const LatticePoint pt{static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
      const double h = v.at(pt) - cost.at(pt);
      const double slack = 1e-9 * (1 + std::abs(v.at(pt)));
      if (m + 1 < v.rows[n].size()) {
        EXPECT_GE(v.at({pt.m + 1, pt.n}) - cost.at(pt.m + 1, pt.n), h - slack);
      }
      if (n + 1 < v.rows.size() && m < v.rows[n + 1].size()) {
        EXPECT_GE(v.at({pt.m, pt.n + 1}) - cost.at(pt.m, pt.n + 1), h - slack);
      }
    }
  }
}

TEST(ValueTables, HIsNonDecreasing) {
  for (double eta : {2.0, 3.0}) {
    const CostModel cost(CostParams{0.1, 0.01, eta});
    for (double q : {0.3, 0.5}) {
      const PathParams pp(0.02, q);
      for (int k : {1, 2, 5, 20}) {
        expect_h_monotone(finite_horizon_values(k, pp, cost, 41.0, 30, 30), cost);
      }
      expect_h_monotone(value_iteration(pp, cost, 41.0), cost);
    }
  }
}

TEST(ValueIteration, FiniteHorizonValuesIncreaseToTheLimit) {
  // Costs are nonnegative, so J_K grows with K toward J.
  const PathParams pp(0.5, 0.5);
  const auto v = value_iteration(pp, kQuad, 1.0);
  double prev = 0;
  for (int k : {1, 2, 5, 20, 60}) {
    const double jk = finite_horizon_values(k, pp, kQuad, 1.0, 4, 4).at({0, 0});
    EXPECT_GE(jk, prev - 1e-12);
    EXPECT_LE(jk, v.at({0, 0}) + 1e-9);
    prev = jk;
  }
  EXPECT_NEAR(prev, v.at({0, 0}), 1e-9);
}

TEST(ValueIteration, MatchesFixedPointOnReferenceInstance) {
  const PathParams pp(0.02, 0.5);
  const auto v = value_iteration(pp, kQuad, 41.0);
  const auto osla = solve_unconstrained(pp, kQuad, 41.0);
  EXPECT_NEAR(v.at({0, 0}), osla.g_star, 1e-6);
  EXPECT_EQ(bellman_placement_set(v), osla.optimal_set);
  EXPECT_LE(v.error_bound, 1e-9);
}

TEST(ValueIteration, OneDimensionalOracle) {
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= 200; ++k) {
    best = std::min(best, oracle::threshold_1d(k, 0.5, 1.0, quad_d).g);
  }
  const auto v = value_iteration(PathParams(0.5, 1.0), kQuad, 1.0);
  EXPECT_NEAR(v.at({0, 0}), best, 1e-8);
  EXPECT_EQ(bellman_placement_set(v).domain(), SetDomain::east_axis);
}

TEST(ValueIteration, OffDomainStatesPlace) {
  const PathParams pp(0.02, 0.3);
  const auto v = value_iteration(pp, kQuad, 41.0);
  const LatticePoint far{500, 500};
  EXPECT_FALSE(v.in_domain(far));
  const auto c = branch_costs(v, far);
  EXPECT_LT(c.place, c.skip);
  EXPECT_DOUBLE_EQ(v.at(far), c.place);
}

TEST(BellmanSet, QuadraticBoundaryIsAStraightLine) {
  for (double p : {0.5, 0.02, 0.002}) {
    for (double q : {0.3, 0.5, 0.7}) {
      const auto v = value_iteration(PathParams(p, q), kQuad, 41.0);
      const auto set = bellman_placement_set(v);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::int64_t n = 0; n < set.n_max(); ++n) {
        const double level = q * static_cast<double>(set.m_star(n)) + (1 - q) * n;
        lo = std::min(lo, level);
        hi = std::max(hi, level);
      }
      EXPECT_LE(hi - lo, 1.0) << p << " " << q;
    }
  }
}

TEST(BellmanSet, PlacesOnExactTie) {
  const PathParams pp(0.5, 0.5);
  const auto v = value_iteration(pp, kQuad, 1.0);
  const auto c = branch_costs(v, {56, 0});
  EXPECT_NEAR(c.place, c.skip, 1e-9);
  const auto set = bellman_placement_set(v);
  EXPECT_TRUE(set.contains({56, 0}));
  EXPECT_TRUE(set.contains({30, 26}));
  EXPECT_FALSE(set.contains({55, 0}));
}

TEST(VerifyEquivalence, DefaultOneDimensionalAndAcrossAStep) {
  EXPECT_TRUE(verify_osla_equivalence(PathParams(0.02, 0.5), kQuad, 41.0).passed);
  EXPECT_TRUE(verify_osla_equivalence(PathParams(0.5, 1.0), kQuad, 1.0).passed);
  // lambda values either side of a jump in the optimal set.
  const PathParams pp(0.02, 0.5);
  const auto a = verify_osla_equivalence(pp, kQuad, 1.0);
  const auto b = verify_osla_equivalence(pp, kQuad, 1.3);
  EXPECT_TRUE(a.passed) << a.detail;
  EXPECT_TRUE(b.passed) << b.detail;
  EXPECT_FALSE(a.osla_set == b.osla_set);
}

TEST(VerifyEquivalence, NorthAxis) {
  const auto r = verify_osla_equivalence(PathParams(0.02, 0.0),
                                         CostModel(CostParams{0.1, 0.01, 3.0}), 41.0);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_EQ(r.osla_set.domain(), SetDomain::north_axis);
}

}  // namespace
}  // namespace relay
