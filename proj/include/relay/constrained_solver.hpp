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

#ifndef RELAY_CONSTRAINED_SOLVER_HPP
#define RELAY_CONSTRAINED_SOLVER_HPP

#include <span>
#include <string>
#include <vector>

#include "relay/core_model.hpp"
#include "relay/osla_solver.hpp"
#include "relay/placement_set.hpp"
#include "relay/renewal_eval.hpp"

namespace relay {

struct CurvePoint {
  double lambda = 0.0;
  double expected_relays = 0.0;  ///< E N
  double expected_cost = 0.0;    ///< E C = J - lambda * E N
  double total_cost = 0.0;       ///< J = g*
  PlacementSet set;
};

/// Unconstrained solutions along an ascending lambda grid. Points are solved
/// concurrently; the output keeps grid order.
std::vector<CurvePoint> relay_curve(const PathParams& pp, const CostModel& cost,
                                    std::span<const double> lambda_grid,
                                    unsigned threads = 0);

enum class ConstrainedKind { pure, mixed, unconstrained_at_zero };

std::string to_string(ConstrainedKind kind);

/**
 * Result of minimizing E C subject to E N <= rho_avg.
 *
 * For a mixed solution the deployment picks set_over with probability alpha
 * and set_under otherwise, once, before the walk starts. Pure solutions carry
 * the same set in both slots and alpha = 0.
 */
struct ConstrainedSolution {
  ConstrainedKind kind = ConstrainedKind::pure;
  double rho_avg = 0.0;
  double rho_max = 0.0;  ///< E N at lambda = 0
  double lambda = 0.0;
  PlacementSet set_under;  ///< fewer relays (right limit of the step)
  PlacementSet set_over;   ///< more relays (left limit)
  SetEvaluation eval_under;
  SetEvaluation eval_over;
  double alpha = 0.0;
  double achieved_relays = 0.0;
  double achieved_cost = 0.0;
  /// False when rho_avg lies below every E N the search could reach; the
  /// fields then describe the sparsest policy found.
  bool feasible = true;
  int solves = 0;  ///< unconstrained solves spent
};

struct ConstrainedOptions {
  double lambda_cap = 1e9;
  /// Stop raising lambda once the placement complement would exceed this many
  /// points; the instance is then reported infeasible.
  std::int64_t max_complement = 20'000'000;
  int max_refinements = 200;
};

/// Throws ValidationError unless rho_avg > 0.
ConstrainedSolution solve_constrained(const PathParams& pp, const CostModel& cost,
                                      double rho_avg,
                                      const ConstrainedOptions& options = {});

}  // namespace relay

#endif  // RELAY_CONSTRAINED_SOLVER_HPP
