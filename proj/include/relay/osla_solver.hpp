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

#ifndef RELAY_OSLA_SOLVER_HPP
#define RELAY_OSLA_SOLVER_HPP

#include <cstddef>
#include <vector>

#include "relay/core_model.hpp"
#include "relay/placement_set.hpp"
#include "relay/renewal_eval.hpp"

namespace relay {

struct SolveOptions {
  double initial_h = 0.0;     ///< h^(0); a warm start for sweeps
  int max_iterations = 1000;  ///< cap on evaluations of g
};

struct SolveResult {
  double g_star = 0.0;
  PlacementSet optimal_set;
  std::vector<double> trace;               ///< h^(0), h^(1), ..., g*
  int iterations = 0;                      ///< evaluations of g
  std::vector<SetEvaluation> evaluations;  ///< one per iteration
  double lambda = 0.0;

  /// Evaluation of the optimal set (the last entry of `evaluations`).
  const SetEvaluation& final_evaluation() const { return evaluations.back(); }
};

/// The set {(m,n) != (0,0) : p(lambda + h) <= D_q(m,n)}, including the case
/// lambda + h == 0 where only the origin is left out.
PlacementSet osla_set(const PathParams& pp, const CostModel& cost,
                      double lambda, double h);

/// g(h): renewal cost of osla_set(h).
SetEvaluation evaluate_h(const PathParams& pp, const CostModel& cost,
                         double lambda, double h);

/// Fixed-point iteration h <- g(h) until the set stops changing. Throws
/// ConvergenceError (with the trace) if the cap is reached.
SolveResult solve_unconstrained(const PathParams& pp, const CostModel& cost,
                                double lambda, const SolveOptions& options = {});

struct GridScan {
  std::vector<double> h;
  std::vector<double> g;
  std::size_t argmin = 0;
  double g_min = 0.0;
  int diagonal_crossings = 0;  ///< sign changes of g(h) - h along the grid
};

/// g(h) on h = 0, step, 2 step, ... <= h_max.
GridScan grid_scan(const PathParams& pp, const CostModel& cost, double lambda,
                   double h_max, double step);

}  // namespace relay

#endif  // RELAY_OSLA_SOLVER_HPP
