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

#ifndef RELAY_RENEWAL_EVAL_HPP
#define RELAY_RENEWAL_EVAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "relay/core_model.hpp"
#include "relay/placement_set.hpp"

namespace relay {

/// Exact renewal evaluation of a placement set.
struct SetEvaluation {
  double g = 0.0;                  ///< cost-to-go from a renewal point
  double expected_relays = 0.0;    ///< E N
  double expected_cost = 0.0;      ///< E C = g - lambda * E N
  double continue_mass = 0.0;      ///< sum over B of P((m,n), c)
  double end_mass = 0.0;           ///< sum over P^c and B of P((m,n), e)
  double identity_residual = 0.0;  ///< see identity_residual()
  double lambda = 0.0;
};

/// Probability that the path reaches (m, n) and continues:
/// (1-p)^(m+n) C(m+n, m) q^m (1-q)^n. Log space above m + n = 30.
double reaching_prob(LatticePoint pt, const PathParams& pp);

/// Reaching probabilities over the complement of a set, recomputed by a
/// forward recursion. Entries outside the complement read as zero.
class ReachingTable {
 public:
  ReachingTable() = default;
  explicit ReachingTable(std::vector<std::vector<double>> rows)
      : rows_(std::move(rows)) {}

  double at(LatticePoint pt) const;
  std::size_t row_count() const { return rows_.size(); }
  std::span<const double> row(std::size_t n) const { return rows_.at(n); }
  std::size_t size() const;

 private:
  std::vector<std::vector<double>> rows_;
};

ReachingTable reaching_table(const PlacementSet& set, const PathParams& pp);

struct HitProbs {
  double p_end = 0.0;   ///< path reaches the point and ends there
  double p_cont = 0.0;  ///< path reaches a boundary point and continues
};

/// Closed-form hitting probabilities for a point of P^c or of the boundary.
/// The origin is never hit (the path always takes one step), so it reports
/// zeros. Throws ValidationError for interior points of the set.
HitProbs hit_probs(const PlacementSet& set, LatticePoint pt,
                   const PathParams& pp);

/// Renewal cost g, E N and the mass checks for an admissible set. Throws
/// ConsistencyError if the continuation mass reaches 1.
SetEvaluation eval_cost(const PlacementSet& set, const PathParams& pp,
                        const CostModel& cost, double lambda);

/// sum over P^c of r(m,n) (D_q(m,n) - p(lambda + g)) + d(0,0) + lambda.
/// Vanishes when g is the set's renewal cost.
double identity_residual(const PlacementSet& set, double g,
                         const PathParams& pp, const CostModel& cost,
                         double lambda);

}  // namespace relay

#endif  // RELAY_RENEWAL_EVAL_HPP
