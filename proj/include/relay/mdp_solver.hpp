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

#ifndef RELAY_MDP_SOLVER_HPP
#define RELAY_MDP_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "relay/core_model.hpp"
#include "relay/osla_solver.hpp"
#include "relay/placement_set.hpp"

namespace relay {

/**
 * Values J(m, n) on a staircase domain: row n holds m = 0..rows[n].size()-1.
 *
 * Finite-horizon tables cover a rectangle and reject lookups outside it.
 * Infinite-horizon tables force placement off the domain, so J there is
 * lambda + d(m, n) + R with R the continuation value after a placement.
 */
struct ValueTable {
  std::vector<std::vector<double>> rows;
  int horizon = 0;  ///< K for finite-horizon tables, 0 for the limit
  double residual = 0.0;        ///< last sup-norm change
  double error_bound = 0.0;     ///< bound on the distance to the fixed point
  std::int64_t iterations = 0;  ///< Bellman sweeps
  double lambda = 0.0;
  double continuation = 0.0;    ///< R = (1-p)q J(1,0) + (1-p)(1-q) J(0,1) + p d(1)
  double domain_threshold = 0.0;  ///< domain is {D_q < this}; 0 for rectangles
  PathParams pp;
  CostModel cost{CostParams{}};

  bool in_domain(LatticePoint pt) const;
  double at(LatticePoint pt) const;
  std::int64_t state_count() const;
};

/// J_K on [0, M] x [0, N]. Computed on a grid widened by K so that every
/// successor the recursion needs is available; no truncation is involved.
ValueTable finite_horizon_values(int horizon, const PathParams& pp,
                                 const CostModel& cost, double lambda,
                                 std::int64_t max_m, std::int64_t max_n);

struct ValueIterationOptions {
  double tol = 1e-9;  ///< target distance to the fixed point (sup norm)
  std::int64_t max_iterations = 5'000'000;
  double domain_margin = 1.1;  ///< domain threshold over p (lambda + J(0,0))
};

/// Jacobi value iteration on a staircase domain {D_q < t_dom}, enlarged until
/// t_dom >= margin * p (lambda + J(0,0)); placement is forced beyond it.
ValueTable value_iteration(const PathParams& pp, const CostModel& cost,
                           double lambda,
                           const ValueIterationOptions& options = {});

/// c_p and c_np at a state from a converged table.
struct BranchCosts {
  double place = 0.0;
  double skip = 0.0;
};
BranchCosts branch_costs(const ValueTable& v, LatticePoint pt);

/// {c_p <= c_np + tie_tol} as a placement set. A negative tie_tol selects
/// 10 * error_bound. Throws StructureError unless the set has threshold form.
PlacementSet bellman_placement_set(const ValueTable& v, double tie_tol = -1.0);

struct EquivalenceReport {
  bool passed = false;
  bool sets_equal = false;
  double value_gap = 0.0;  ///< |J(0,0) - g*|
  double g_star = 0.0;
  double j00 = 0.0;
  PlacementSet osla_set;
  PlacementSet bellman_set;
  std::string detail;
};

/// Runs both solvers and compares sets exactly and values to 10 * tol.
EquivalenceReport verify_osla_equivalence(const PathParams& pp,
                                          const CostModel& cost, double lambda,
                                          double tol = 1e-9);

}  // namespace relay

#endif  // RELAY_MDP_SOLVER_HPP
