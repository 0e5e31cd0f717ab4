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

#include "oracles.hpp"
#include "relay/osla_solver.hpp"

namespace relay {
namespace {

double quad_d(double r) { return 0.1 + 0.01 * r * r; }

TEST(SolveUnconstrained, OneDimensionalBruteForce) {
  const PathParams pp(0.5, 1.0);
  const CostModel cost(CostParams{0.1, 0.01, 2.0});
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_k = 0;
  for (std::int64_t k = 1; k <= 200; ++k) {
    const double g = oracle::threshold_1d(k, 0.5, 1.0, quad_d).g;
    if (g < best) {
      best = g;
      best_k = k;
    }
  }
  const auto result = solve_unconstrained(pp, cost, 1.0);
  EXPECT_NEAR(result.g_star, best, 1e-10);
  EXPECT_EQ(result.optimal_set.domain(), SetDomain::east_axis);
  EXPECT_EQ(result.optimal_set.rows().front(), best_k);
}

TEST(SolveUnconstrained, ReferenceInstanceWithCubicCost) {
  const auto result = solve_unconstrained(
      PathParams(0.02, 0.5), CostModel(CostParams{0.1, 0.01, 3.0}), 41.0);
  EXPECT_GE(result.g_star, 120.0);
  EXPECT_LE(result.g_star, 180.0);
  EXPECT_LE(result.iterations, 10);
}

TEST(SolveUnconstrained, ReferenceInstanceWithQuadraticCost) {
  // The same corridor with eta = 2 settles far lower.
  const auto result = solve_unconstrained(
      PathParams(0.02, 0.5), CostModel(CostParams{0.1, 0.01, 2.0}), 41.0);
  EXPECT_NEAR(result.g_star, 23.2345, 1e-3);
  EXPECT_LE(result.iterations, 10);
}

void expect_trace_properties(const SolveResult& r) {
  ASSERT_GE(r.trace.size(), 2u);
  // h^(1) >= h^(2) >= ... strictly until the last value.
  for (std::size_t k = 2; k + 1 < r.trace.size(); ++k) {
    EXPECT_LT(r.trace[k], r.trace[k - 1]);
  }
  EXPECT_EQ(r.trace.back(), r.g_star);
  EXPECT_EQ(static_cast<std::size_t>(r.iterations), r.evaluations.size());
  EXPECT_EQ(r.trace.size(), r.evaluations.size() + 1);
}

TEST(SolveUnconstrained, TraceAndNestingAcrossInstances) {
  for (double p : {0.5, 0.02, 0.002}) {
    for (double q : {0.0, 0.3, 0.5, 1.0}) {
      for (double eta : {2.0, 3.0}) {
        const CostModel cost(CostParams{0.1, 0.01, eta});
        const PathParams pp(p, q);
        const double lambda = 1.0;
        const auto r = solve_unconstrained(pp, cost, lambda);
        expect_trace_properties(r);
        EXPECT_LE(r.iterations, 10);
        for (std::size_t k = 2; k < r.trace.size(); ++k) {
          // Iterates one ulp apart straddle an exact tie; skip those.
          if (r.trace[k - 1] - r.trace[k] <= 1e-12 * (1 + r.trace[k])) continue;
          const auto newer = osla_set(pp, cost, lambda, r.trace[k]);
          const auto older = osla_set(pp, cost, lambda, r.trace[k - 1]);
          EXPECT_TRUE(newer.complement_within(older))
              << p << ' ' << q << ' ' << eta << ' ' << k << ' ' << r.trace[k] << ' '
              << r.trace[k - 1];
        }
        const auto g_final = eval_cost(r.optimal_set, pp, cost, lambda).g;
        EXPECT_NEAR(g_final, r.g_star, 1e-12 * (1 + r.g_star));
      }
    }
  }
}

TEST(SolveUnconstrained, WarmStartFromAboveReachesSameFixedPoint) {
  const PathParams pp(0.02, 0.3);
  const CostModel cost(CostParams{0.1, 0.01, 2.0});
  const auto cold = solve_unconstrained(pp, cost, 5.0);
  SolveOptions warm;
  warm.initial_h = 3 * cold.g_star;
  const auto hot = solve_unconstrained(pp, cost, 5.0, warm);
  EXPECT_EQ(hot.optimal_set, cold.optimal_set);
  EXPECT_NEAR(hot.g_star, cold.g_star, 1e-12 * cold.g_star);
  for (std::size_t k = 1; k + 1 < hot.trace.size(); ++k) {
    EXPECT_LT(hot.trace[k], hot.trace[k - 1]);
  }
}

TEST(SolveUnconstrained, ZeroPriceAndValidation) {
  const CostModel cost(CostParams{0.1, 0.01, 2.0});
  const auto r = solve_unconstrained(PathParams(0.02, 0.5), cost, 0.0);
  EXPECT_GT(r.g_star, 0.0);
  EXPECT_THROW(solve_unconstrained(PathParams(1.0, 0.5), cost, 1.0), ValidationError);
  EXPECT_THROW(solve_unconstrained(PathParams(0.5, 0.5), cost, -1.0), ValidationError);
  SolveOptions capped;
  capped.max_iterations = 1;
  EXPECT_THROW(solve_unconstrained(PathParams(0.002, 0.5), cost, 41.0, capped),
               ConvergenceError);
}

TEST(SolveUnconstrained, ThresholdTiePlacesOnTheTie) {
  // With p = q = 0.5 and lambda = 1 the fixed point puts the antidiagonal
  // m + n = 56 exactly on the threshold.
  const auto r = solve_unconstrained(PathParams(0.5, 0.5),
                                     CostModel(CostParams{0.1, 0.01, 2.0}), 1.0);
  EXPECT_NEAR(r.g_star, 0.14, 1e-12);
  EXPECT_TRUE(r.optimal_set.contains({56, 0}));
  EXPECT_TRUE(r.optimal_set.contains({28, 28}));
  EXPECT_FALSE(r.optimal_set.contains({55, 0}));
}

TEST(GridScan, SingleCrossingAndSandwich) {
  const PathParams pp(0.02, 0.5);
  const CostModel cost(CostParams{0.1, 0.01, 3.0});
  const auto r = solve_unconstrained(pp, cost, 41.0);
  const auto scan = grid_scan(pp, cost, 41.0, 400.0, 0.5);
  EXPECT_EQ(scan.diagonal_crossings, 1);
  EXPECT_GE(scan.g_min, r.g_star - 1e-9);
  for (std::size_t i = 0; i < scan.h.size(); ++i) {
    EXPECT_GE(scan.g[i], r.g_star - 1e-9 * r.g_star);
    if (scan.h[i] > r.g_star) {
      EXPECT_LT(scan.g[i], scan.h[i]);
    }
  }
  // The grid minimum sits on the optimal set once the grid brackets g*.
  EXPECT_NEAR(scan.g_min, r.g_star, 1e-9 * r.g_star);
  // g(g*) = g*.
  EXPECT_NEAR(evaluate_h(pp, cost, 41.0, r.g_star).g, r.g_star, 1e-12 * r.g_star);
}

TEST(GridScan, Validation) {
  const CostModel cost(CostParams{0.1, 0.01, 2.0});
  EXPECT_THROW(grid_scan(PathParams(0.5, 0.5), cost, 1.0, 0.0, 0.1), ValidationError);
  EXPECT_THROW(grid_scan(PathParams(0.5, 0.5), cost, 1.0, 1.0, 0.0), ValidationError);
}

}  // namespace
}  // namespace relay
