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

#ifndef RELAY_HEURISTIC_POLICY_HPP
#define RELAY_HEURISTIC_POLICY_HPP

#include <span>
#include <vector>

#include "relay/core_model.hpp"
#include "relay/placement_set.hpp"
#include "relay/renewal_eval.hpp"

namespace relay {

/// {(m, n) != (0, 0) : m^2 + n^2 >= r_th^2}. On an axis domain this is
/// {m >= ceil(r_th)} (or n), never below 1. Throws ValidationError unless
/// r_th > 0.
PlacementSet distance_set(double r_th, SetDomain domain = SetDomain::plane);

/// The domain a corridor's sets live on.
SetDomain domain_for(const PathParams& pp);

struct ThresholdPoint {
  double r_th = 0.0;
  double expected_relays = 0.0;
  double expected_cost = 0.0;
};

/// E N and E C of every distance set on the grid (both independent of lambda).
std::vector<ThresholdPoint> threshold_frontier(const PathParams& pp,
                                               const CostModel& cost,
                                               std::span<const double> r_grid,
                                               unsigned threads = 0);

struct HeuristicResult {
  double r_th = 0.0;
  PlacementSet set;
  SetEvaluation evaluation;
  std::vector<ThresholdPoint> frontier;
};

/// Best distance threshold on the grid for price lambda. Ties keep the
/// smallest r_th. Throws ValidationError on an empty grid.
HeuristicResult optimize_threshold(const PathParams& pp, const CostModel& cost,
                                   double lambda, std::span<const double> r_grid,
                                   unsigned threads = 0);

/// 0.5, 0.55, ... up to the diagonal of the optimal set's complement box + 2.
std::vector<double> default_threshold_grid(const PathParams& pp,
                                           const CostModel& cost, double lambda);

/// Grid 0.5, 0.5 + step, ... <= r_max.
std::vector<double> threshold_grid(double r_max, double step = 0.05);

/// Least E C reachable by randomizing between thresholds with E N <= rho,
/// i.e. the lower convex hull of the frontier. NaN below the smallest E N.
double mixed_frontier_cost(std::span<const ThresholdPoint> frontier, double rho);

struct FrontierRow {
  double rho = 0.0;
  double cost_optimal = 0.0;
  double cost_heuristic = 0.0;
};

/// Constrained cost of the optimal policy and of the distance heuristic over
/// a rho grid. The threshold grid defaults to one wide enough for min(rho).
std::vector<FrontierRow> compare(const PathParams& pp, const CostModel& cost,
                                 std::span<const double> rho_grid,
                                 std::span<const double> r_grid = {},
                                 unsigned threads = 0);

}  // namespace relay

#endif  // RELAY_HEURISTIC_POLICY_HPP
