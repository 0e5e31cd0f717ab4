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

#include "relay/core_model.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "relay/log.hpp"

namespace relay {

PathParams::PathParams(double p_end, double q_east) : p(p_end), q(q_east) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("p", "termination probability must lie in (0, 1]");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("q", "East probability must lie in [0, 1]");
  }
}

void PathParams::require_solvable() const {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("p", "solvers require 0 < p < 1");
  }
}

CostParams::CostParams(double min_power, double snr_coeff, double path_loss)
    : p_m(min_power), gamma(snr_coeff), eta(path_loss) {
  if (!(p_m > 0.0)) throw ValidationError("p_m", "must be positive (d(0) > 0)");
  if (!(gamma > 0.0)) throw ValidationError("gamma", "must be positive");
  if (!(eta >= 1.0)) throw ValidationError("eta", "must be at least 1");
}

RelayPrice::RelayPrice(double value) : lambda(value) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda", "must be nonnegative");
}

double HopCost::at_point(std::int64_t m, std::int64_t n) const {
  return at_distance(std::hypot(static_cast<double>(m), static_cast<double>(n)));
}

double HopCost::difference(LatticePoint from, LatticePoint to) const {
  return at_point(to.m, to.n) - at_point(from.m, from.n);
}

PowerCost::PowerCost(const CostParams& params) : params_(params) {
  // Re-run the invariant checks for aggregates built field by field.
  CostParams checked(params.p_m, params.gamma, params.eta);
  (void)checked;
  static std::once_flag warned;
  if (params_.eta == 1.0) {
    std::call_once(warned, [] {
      log::warn(
        "eta = 1: cost increments are bounded by gamma, so placement sets "
        "with threshold above gamma have infinite complements");
    });
  }
}

double PowerCost::scaled_power(double squared_norm) const {
  if (params_.eta == 2.0) return params_.gamma * squared_norm;
  return params_.gamma * std::pow(squared_norm, 0.5 * params_.eta);
}

double PowerCost::at_distance(double r) const {
  if (!(r >= 0.0)) throw ValidationError("r", "distance must be nonnegative");
  return params_.p_m + params_.gamma * std::pow(r, params_.eta);
}

double PowerCost::at_point(std::int64_t m, std::int64_t n) const {
  const double sq = static_cast<double>(m) * static_cast<double>(m) +
                    static_cast<double>(n) * static_cast<double>(n);
  return params_.p_m + scaled_power(sq);
}

double PowerCost::difference(LatticePoint from, LatticePoint to) const {
  const double sq_from = static_cast<double>(from.m) * static_cast<double>(from.m) +
                         static_cast<double>(from.n) * static_cast<double>(from.n);
  const double sq_to = static_cast<double>(to.m) * static_cast<double>(to.m) +
                       static_cast<double>(to.n) * static_cast<double>(to.n);
  if (params_.eta == 2.0) return params_.gamma * (sq_to - sq_from);
  // P_m cancels; keep only the power terms.
  return params_.gamma * (std::pow(sq_to, 0.5 * params_.eta) -
                          std::pow(sq_from, 0.5 * params_.eta));
}

std::string PowerCost::describe() const {
  std::ostringstream out;
  out << "power(p_m=" << params_.p_m << ", gamma=" << params_.gamma
      << ", eta=" << params_.eta << ")";
  return out.str();
}

bool CostValidationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const ConditionCheck* CostValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

CostModel::CostModel(const CostParams& params)
    : cost_(std::make_shared<PowerCost>(params)) {}

CostModel::CostModel(std::shared_ptr<const HopCost> cost)
    : cost_(std::move(cost)) {}

CostModel CostModel::custom(std::shared_ptr<const HopCost> cost,
                            std::int64_t extent) {
  if (!cost) throw ValidationError("cost", "null hop cost");
  CostModel model(std::move(cost));
  const auto report = validate_cost_model(model, extent);
  if (!report.all_passed()) {
    std::ostringstream out;
    out << "custom cost " << model.hop_cost().describe() << " rejected:";
    for (const auto& c : report.checks) {
      if (!c.passed) out << ' ' << c.name << " (" << c.detail << ')';
    }
    throw CostModelError(out.str());
  }
  return model;
}

const CostParams* CostModel::power_params() const {
  const auto* power = dynamic_cast<const PowerCost*>(cost_.get());
  return power == nullptr ? nullptr : &power->params();
}

double hop_cost(double r, const CostParams& params) {
  return PowerCost(params).at_distance(r);
}

double hop_cost_point(LatticePoint pt, const CostModel& cost) {
  return cost.at(pt);
}

HopDeltas hop_deltas(LatticePoint pt, double q, const CostModel& cost) {
  HopDeltas out;
  out.east = cost.difference(pt, {pt.m + 1, pt.n});
  out.north = cost.difference(pt, {pt.m, pt.n + 1});
  if (q == 1.0) {
    out.mixed = out.east;
  } else if (q == 0.0) {
    out.mixed = out.north;
  } else {
    out.mixed = q * out.east + (1.0 - q) * out.north;
  }
  return out;
}

namespace {

std::string at_point_text(std::int64_t m, std::int64_t n) {
  std::ostringstream out;
  out << "at (" << m << ", " << n << ")";
  return out.str();
}

// a >= b up to rounding of quantities of the size of `scale`.
bool not_below(double a, double b, double scale) {
  return a >= b - 1e-12 * (1.0 + std::abs(scale));
}

}  // namespace

CostValidationReport validate_cost_model(const CostModel& cost,
                                         std::int64_t extent) {
  if (extent < 2) throw ValidationError("extent", "must be at least 2");
  CostValidationReport report;
  report.extent = extent;

  ConditionCheck positive{"C1_positive_at_zero", true, ""};
  const double d0 = cost.at(0, 0);
  if (!(d0 > 0.0)) {
    positive.passed = false;
    positive.detail = "d(0,0) = " + std::to_string(d0);
  }
  report.checks.push_back(positive);

  ConditionCheck convex{"C2_convex_along_lattice", true, ""};
  ConditionCheck increments{"lemma2_monotone_increments", true, ""};
  for (std::int64_t n = 0; n <= extent && convex.passed; ++n) {
    for (std::int64_t m = 1; m <= extent; ++m) {
      const double right = cost.difference({m, n}, {m + 1, n});
      const double left = cost.difference({m - 1, n}, {m, n});
      if (!not_below(right, left, cost.at(m, n))) {
        convex.passed = false;
        convex.detail = "row " + at_point_text(m, n);
        break;
      }
      const double up = cost.difference({n, m}, {n, m + 1});
      const double down = cost.difference({n, m - 1}, {n, m});
      if (!not_below(up, down, cost.at(n, m))) {
        convex.passed = false;
        convex.detail = "column " + at_point_text(n, m);
        break;
      }
    }
  }
  report.checks.push_back(convex);

  for (std::int64_t m = 0; m <= extent && increments.passed; ++m) {
    for (std::int64_t n = 0; n <= extent; ++n) {
      const LatticePoint pt{m, n};
      const auto here = hop_deltas(pt, 0.5, cost);
      const auto east = hop_deltas({m + 1, n}, 0.5, cost);
      const auto north = hop_deltas({m, n + 1}, 0.5, cost);
      const double scale = cost.at(m + 1, n + 1);
      const bool ok = not_below(east.east, here.east, scale) &&
                      not_below(north.east, here.east, scale) &&
                      not_below(east.north, here.north, scale) &&
                      not_below(north.north, here.north, scale);
      if (!ok) {
        increments.passed = false;
        increments.detail = "increments decrease " + at_point_text(m, n);
        break;
      }
    }
  }
  report.checks.push_back(increments);

  ConditionCheck growth{"C3_increment_growth", true, ""};
  const double first = cost.difference({0, 0}, {1, 0});
  const double last = cost.difference({extent, 0}, {extent + 1, 0});
  if (!(last > first)) {
    growth.passed = false;
    std::ostringstream out;
    out << "D1(" << extent << ",0) = " << last << " does not exceed D1(0,0) = "
        << first;
    growth.detail = out.str();
  }
  report.checks.push_back(growth);
  return report;
}

}  // namespace relay
