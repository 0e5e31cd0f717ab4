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

#include "relay/constrained_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relay/log.hpp"
#include "relay/parallel.hpp"

namespace relay {

std::string to_string(ConstrainedKind kind) {
  switch (kind) {
    case ConstrainedKind::pure: return "pure";
    case ConstrainedKind::mixed: return "mixed";
    case ConstrainedKind::unconstrained_at_zero: return "unconstrained-at-zero";
  }
  return "pure";
}

std::vector<CurvePoint> relay_curve(const PathParams& pp, const CostModel& cost,
                                    std::span<const double> lambda_grid,
                                    unsigned threads) {
  pp.require_solvable();
  for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= lambda_grid[i - 1])) {
      throw ValidationError("lambda_grid", "must be sorted ascending");
    }
  }
  std::vector<CurvePoint> out(lambda_grid.size());
  parallel_for(
      lambda_grid.size(),
      [&](std::size_t i) {
        const auto r = solve_unconstrained(pp, cost, lambda_grid[i]);
        const auto& ev = r.final_evaluation();
        out[i] = CurvePoint{lambda_grid[i], ev.expected_relays, ev.expected_cost,
                            r.g_star, r.optimal_set};
      },
      threads);
  return out;
}

namespace {

struct Probe {
  double lambda = 0.0;
  PlacementSet set;
  SetEvaluation eval;  // at `lambda`
};

Probe probe(const PathParams& pp, const CostModel& cost, double lambda) {
  auto r = solve_unconstrained(pp, cost, lambda);
  return Probe{lambda, r.optimal_set, r.final_evaluation()};
}

bool same_relays(double a, double b) {
  return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
}

// Objective of a fixed set at another price.
double line(const SetEvaluation& ev, double lambda) {
  return ev.expected_cost + lambda * ev.expected_relays;
}

ConstrainedSolution pure_solution(const Probe& at, double rho, double rho_max,
                                  ConstrainedKind kind, int solves) {
  ConstrainedSolution s;
  s.kind = kind;
  s.rho_avg = rho;
  s.rho_max = rho_max;
  s.lambda = at.lambda;
  s.set_under = s.set_over = at.set;
  s.eval_under = s.eval_over = at.eval;
  s.achieved_relays = at.eval.expected_relays;
  s.achieved_cost = at.eval.expected_cost;
  s.solves = solves;
  return s;
}

}  // namespace

ConstrainedSolution solve_constrained(const PathParams& pp, const CostModel& cost,
                                      double rho_avg,
                                      const ConstrainedOptions& options) {
  if (!(rho_avg > 0.0) || !std::isfinite(rho_avg)) {
    throw ValidationError("rho_avg", "must be a positive number");
  }
  pp.require_solvable();
  int solves = 1;
  const Probe zero = probe(pp, cost, 0.0);
  const double rho_max = zero.eval.expected_relays;
  if (rho_avg >= rho_max) {
    return pure_solution(zero, rho_avg, rho_max,
                         ConstrainedKind::unconstrained_at_zero, solves);
  }

  // Raise lambda until E N drops to rho_avg or below.
  Probe lo = zero;
  Probe hi;
  for (double lambda = 1.0;; lambda *= 2.0) {
    if (lambda > options.lambda_cap ||
        osla_set(pp, cost, lambda, 0.0).complement_size() > options.max_complement) {
      auto s = pure_solution(lo, rho_avg, rho_max, ConstrainedKind::pure, solves);
      s.feasible = false;
      std::ostringstream msg;
      msg << "rho_avg = " << rho_avg << " is below the sparsest reachable E N = "
          << lo.eval.expected_relays << " (lambda = " << lo.lambda << ")";
      log::warn(msg.str());
      return s;
    }
    Probe next = probe(pp, cost, lambda);
    ++solves;
    if (same_relays(next.eval.expected_relays, rho_avg)) {
      return pure_solution(next, rho_avg, rho_max, ConstrainedKind::pure, solves);
    }
    if (next.eval.expected_relays < rho_avg) {
      hi = std::move(next);
      break;
    }
    lo = std::move(next);
  }

  // E N(lambda) is a staircase. Probe where the objective lines of the two
  // bracketing sets cross: either that point is the step (no set beats both
  // lines there) or it exposes a set in between, which tightens the bracket.
  double step = lo.lambda;
  for (int k = 0;; ++k) {
    if (k >= options.max_refinements) {
      throw ConvergenceError("constrained step search did not settle");
    }
    const double slope = lo.eval.expected_relays - hi.eval.expected_relays;
    step = (hi.eval.expected_cost - lo.eval.expected_cost) / slope;
    step = std::clamp(step, lo.lambda, hi.lambda);
    if (hi.lambda - lo.lambda < 1e-10 * (1.0 + hi.lambda)) break;
    Probe mid = probe(pp, cost, step);
    ++solves;
    const double both = line(lo.eval, step);
    const double scale = 1e-12 * (1.0 + std::abs(both));
    if (mid.set == lo.set || mid.set == hi.set ||
        mid.eval.g >= std::min(both, line(hi.eval, step)) - scale) {
      break;
    }
    if (same_relays(mid.eval.expected_relays, rho_avg)) {
      return pure_solution(mid, rho_avg, rho_max, ConstrainedKind::pure, solves);
    }
    if (mid.eval.expected_relays > rho_avg) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }

  ConstrainedSolution s;
  s.kind = ConstrainedKind::mixed;
  s.rho_avg = rho_avg;
  s.rho_max = rho_max;
  s.lambda = step;
  s.set_under = hi.set;
  s.set_over = lo.set;
  s.eval_under = eval_cost(hi.set, pp, cost, step);
  s.eval_over = eval_cost(lo.set, pp, cost, step);
  const double under = s.eval_under.expected_relays;
  const double over = s.eval_over.expected_relays;
  s.alpha = (rho_avg - under) / (over - under);
  s.achieved_relays = (1.0 - s.alpha) * under + s.alpha * over;
  s.achieved_cost = (1.0 - s.alpha) * s.eval_under.expected_cost +
                    s.alpha * s.eval_over.expected_cost;
  s.solves = solves;
  return s;
}

}  // namespace relay
