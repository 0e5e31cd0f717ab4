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

#include "relay/osla_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "relay/log.hpp"

namespace relay {

namespace {

void check_inputs(const PathParams& pp, double lambda) {
  pp.require_solvable();
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda", "must be a finite nonnegative number");
  }
}

}  // namespace

PlacementSet osla_set(const PathParams& pp, const CostModel& cost,
                      double lambda, double h) {
  const double t = pp.p * (lambda + h);
  if (t > 0.0) return build_set(t, pp.q, cost);
  // Every increment is positive, so only the guarded origin stays out.
  PlacementSet set = pp.q == 1.0   ? PlacementSet::on_axis(SetDomain::east_axis, 1, t, SetFamily::threshold)
                     : pp.q == 0.0 ? PlacementSet::on_axis(SetDomain::north_axis, 1, t, SetFamily::threshold)
                                   : PlacementSet::from_rows({1}, t, SetFamily::threshold);
  set.set_origin_guard(true);
  return set;
}

SetEvaluation evaluate_h(const PathParams& pp, const CostModel& cost,
                         double lambda, double h) {
  check_inputs(pp, lambda);
  return eval_cost(osla_set(pp, cost, lambda, h), pp, cost, lambda);
}

SolveResult solve_unconstrained(const PathParams& pp, const CostModel& cost,
                                double lambda, const SolveOptions& options) {
  check_inputs(pp, lambda);
  if (!(options.initial_h >= 0.0)) {
    throw ValidationError("initial_h", "must be nonnegative");
  }
  if (options.max_iterations < 1) {
    throw ValidationError("max_iterations", "must be at least 1");
  }
  double h = options.initial_h;
  PlacementSet set = osla_set(pp, cost, lambda, h);
  SolveResult result{0.0, set, {h}, 0, {}, lambda};
  while (result.iterations < options.max_iterations) {
    const SetEvaluation ev = eval_cost(set, pp, cost, lambda);
    ++result.iterations;
    result.evaluations.push_back(ev);
    h = ev.g;
    result.trace.push_back(h);
    PlacementSet next = osla_set(pp, cost, lambda, h);
    const double prev_h = result.trace[result.trace.size() - 2];
    if (!(next == set) && result.iterations > 1 &&
        std::abs(h - prev_h) <= 1e-12 * (1.0 + std::abs(h))) {
      // A lattice point sits exactly on the threshold and rounding in g
      // flips it in and out. Both sets cost the same; keep the one that
      // places on the tie.
      const double low = std::min(h, prev_h);
      PlacementSet tied = osla_set(pp, cost, lambda, low);
      const SetEvaluation tied_ev = eval_cost(tied, pp, cost, lambda);
      ++result.iterations;
      result.evaluations.push_back(tied_ev);
      result.trace.push_back(tied_ev.g);
      result.g_star = tied_ev.g;
      result.optimal_set = std::move(tied);
      log::debug("fixed point reached on a threshold tie");
      return result;
    }
    if (next == set) {
      // g depends on h only through the set, so g(h) == h here.
      result.g_star = h;
      result.optimal_set = std::move(next);
      if (log::threshold() >= log::Level::debug) {
        std::ostringstream out;
        out << "fixed point g* = " << h << " after " << result.iterations
            << " evaluations";
        log::debug(out.str());
      }
      return result;
    }
    set = std::move(next);
  }
  std::ostringstream out;
  out << "fixed-point iteration did not settle within "
      << options.max_iterations << " evaluations; trace:";
  for (double v : result.trace) out << ' ' << v;
  throw ConvergenceError(out.str());
}

GridScan grid_scan(const PathParams& pp, const CostModel& cost, double lambda,
                   double h_max, double step) {
  check_inputs(pp, lambda);
  if (!(h_max > 0.0)) throw ValidationError("h_max", "must be positive");
  if (!(step > 0.0)) throw ValidationError("step", "must be positive");
  GridScan scan;
  std::optional<PlacementSet> last_set;
  double last_g = 0.0;
  const auto count = static_cast<std::size_t>(std::floor(h_max / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    const double h = static_cast<double>(i) * step;
    PlacementSet set = osla_set(pp, cost, lambda, h);
    // Neighbouring grid points usually share a set; reuse its evaluation.
    if (!last_set || !(*last_set == set)) {
      last_g = eval_cost(set, pp, cost, lambda).g;
      last_set = std::move(set);
    }
    scan.h.push_back(h);
    scan.g.push_back(last_g);
    if (i == 0 || last_g < scan.g_min) {
      scan.g_min = last_g;
      scan.argmin = i;
    }
  }
  int prev_sign = 0;
  for (std::size_t i = 0; i < scan.h.size(); ++i) {
    const double diff = scan.g[i] - scan.h[i];
    const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (prev_sign != 0 && sign != prev_sign) ++scan.diagonal_crossings;
      prev_sign = sign;
    }
  }
  return scan;
}

}  // namespace relay
