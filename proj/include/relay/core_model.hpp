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

#ifndef RELAY_CORE_MODEL_HPP
#define RELAY_CORE_MODEL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "relay/errors.hpp"

namespace relay {

/**
 * Random corridor model. At every lattice point the path takes one more
 * step, which is its last with probability `p`; independently the step goes
 * East with probability `q` and North otherwise.
 *
 * `p == 1` is admitted so that single-step corridors can be simulated; the
 * solvers require `p < 1` (see PathParams::require_solvable()).
 */
struct PathParams {
  double p = 0.5;
  double q = 0.5;

  PathParams() = default;
  PathParams(double p_end, double q_east);

  /// Throws ValidationError naming "p" unless p < 1.
  void require_solvable() const;

  double continue_prob() const { return 1.0 - p; }
};

/// Parameters of the power hop cost d(r) = p_m + gamma * r^eta.
struct CostParams {
  double p_m = 0.1;
  double gamma = 0.01;
  double eta = 2.0;

  CostParams() = default;
  CostParams(double min_power, double snr_coeff, double path_loss);
};

struct LatticePoint {
  std::int64_t m = 0;  ///< Eastward steps since the last relay.
  std::int64_t n = 0;  ///< Northward steps since the last relay.

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  bool is_origin() const { return m == 0 && n == 0; }
};

/// Price charged per relay placed; nonnegative.
struct RelayPrice {
  double lambda = 0.0;
  explicit RelayPrice(double value);
};

/**
 * A one-hop cost d(r). Implementations must satisfy d(0) > 0, convexity and
 * monotonicity in r, and increments that grow without bound; see
 * validate_cost_model().
 */
class HopCost {
 public:
  virtual ~HopCost() = default;

  /// d(r) for a real distance r >= 0.
  virtual double at_distance(double r) const = 0;

  /// d(||(m,n)||). Overridden by costs that can avoid the square root.
  virtual double at_point(std::int64_t m, std::int64_t n) const;

  /// d(to) - d(from); overridden where the difference has a cancellation-free
  /// closed form.
  virtual double difference(LatticePoint from, LatticePoint to) const;

  virtual std::string describe() const = 0;
};

class PowerCost final : public HopCost {
 public:
  explicit PowerCost(const CostParams& params);

  double at_distance(double r) const override;
  double at_point(std::int64_t m, std::int64_t n) const override;
  double difference(LatticePoint from, LatticePoint to) const override;
  std::string describe() const override;

  const CostParams& params() const { return params_; }

 private:
  double scaled_power(double squared_norm) const;

  CostParams params_;
};

/// Per-condition outcome of validate_cost_model().
struct ConditionCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct CostValidationReport {
  std::int64_t extent = 0;
  std::vector<ConditionCheck> checks;

  bool all_passed() const;
  const ConditionCheck* find(const std::string& name) const;
};

/**
 * Shared, immutable handle on a hop cost. Implicitly constructible from
 * CostParams so the shipped power cost can be passed anywhere a cost model
 * is expected.
 */
class CostModel {
 public:
  CostModel(const CostParams& params);  // NOLINT(google-explicit-constructor)

  /// Wraps a user-supplied cost after checking it on [0, extent]^2; throws
  /// CostModelError when a structural condition fails.
  static CostModel custom(std::shared_ptr<const HopCost> cost,
                          std::int64_t extent = 50);

  double operator()(double r) const { return cost_->at_distance(r); }
  double at(LatticePoint pt) const { return cost_->at_point(pt.m, pt.n); }
  double at(std::int64_t m, std::int64_t n) const {
    return cost_->at_point(m, n);
  }
  double difference(LatticePoint from, LatticePoint to) const {
    return cost_->difference(from, to);
  }

  const HopCost& hop_cost() const { return *cost_; }

  /// Set for power costs; empty for custom costs.
  const CostParams* power_params() const;

 private:
  explicit CostModel(std::shared_ptr<const HopCost> cost);

  std::shared_ptr<const HopCost> cost_;
};

/// d(r) for the power cost. Rejects negative r.
double hop_cost(double r, const CostParams& params);

/// d(m, n) := d(||(m, n)||).
double hop_cost_point(LatticePoint pt, const CostModel& cost);

struct HopDeltas {
  double east = 0.0;   ///< d(m+1, n) - d(m, n)
  double north = 0.0;  ///< d(m, n+1) - d(m, n)
  double mixed = 0.0;  ///< q * east + (1 - q) * north
};

HopDeltas hop_deltas(LatticePoint pt, double q, const CostModel& cost);

/// Expected one-step increment q*D1 + (1-q)*D2 at a lattice point.
inline double expected_increment(LatticePoint pt, double q,
                                 const CostModel& cost) {
  return hop_deltas(pt, q, cost).mixed;
}

/**
 * Lattice-sampled check of the hop-cost conditions on [0, extent]^2:
 * positivity at zero, row/column convexity, monotone increments in both
 * coordinates, and a growth proxy (D1(extent, 0) > D1(0, 0)).
 */
CostValidationReport validate_cost_model(const CostModel& cost,
                                         std::int64_t extent);

}  // namespace relay

#endif  // RELAY_CORE_MODEL_HPP
