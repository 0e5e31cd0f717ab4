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

#include "relay/heuristic_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relay/constrained_solver.hpp"
#include "relay/osla_solver.hpp"
#include "relay/parallel.hpp"

namespace relay {

namespace {

// Least m >= 0 with m^2 + n^2 >= r2.
std::int64_t least_outside(long double r2, std::int64_t n) {
  const long double n2 = static_cast<long double>(n) * n;
  auto outside = [&](std::int64_t m) {
    return static_cast<long double>(m) * m + n2 >= r2;
  };
  auto m = static_cast<std::int64_t>(std::ceil(std::sqrt(std::max(0.0L, r2 - n2))));
  while (m > 0 && outside(m - 1)) --m;
  while (!outside(m)) ++m;
  return m;
}

}  // namespace

PlacementSet distance_set(double r_th, SetDomain domain) {
  if (!(r_th > 0.0) || !std::isfinite(r_th)) {
    throw ValidationError("r_th", "distance threshold must be positive");
  }
  const long double r2 = static_cast<long double>(r_th) * r_th;
  const std::int64_t first = std::max<std::int64_t>(1, least_outside(r2, 0));
  if (domain != SetDomain::plane) {
    return PlacementSet::on_axis(domain, first, r_th, SetFamily::distance);
  }
  std::vector<std::int64_t> rows{first};
  for (std::int64_t n = 1; rows.back() > 0; ++n) rows.push_back(least_outside(r2, n));
  auto set = PlacementSet::from_rows(std::move(rows), r_th, SetFamily::distance);
  return set;
}

SetDomain domain_for(const PathParams& pp) {
  if (pp.q == 1.0) return SetDomain::east_axis;
  if (pp.q == 0.0) return SetDomain::north_axis;
  return SetDomain::plane;
}

std::vector<double> threshold_grid(double r_max, double step) {
  if (!(step > 0.0)) throw ValidationError("step", "must be positive");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double r = 0.5 + i * step;
    if (r > r_max + 1e-12) break;
    grid.push_back(r);
  }
  return grid;
}

std::vector<ThresholdPoint> threshold_frontier(const PathParams& pp,
                                               const CostModel& cost,
                                               std::span<const double> r_grid,
                                               unsigned threads) {
  const SetDomain domain = domain_for(pp);
  // Neighbouring radii often give the same set; evaluate each set once.
  std::vector<PlacementSet> sets;
  std::vector<std::size_t> which(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    auto set = distance_set(r_grid[i], domain);
    if (sets.empty() || !(set == sets.back())) sets.push_back(std::move(set));
    which[i] = sets.size() - 1;
  }
  std::vector<SetEvaluation> evals(sets.size());
  parallel_for(
      sets.size(),
      [&](std::size_t k) { evals[k] = eval_cost(sets[k], pp, cost, 0.0); },
      threads);
  std::vector<ThresholdPoint> out(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const auto& ev = evals[which[i]];
    out[i] = ThresholdPoint{r_grid[i], ev.expected_relays, ev.expected_cost};
  }
  return out;
}

HeuristicResult optimize_threshold(const PathParams& pp, const CostModel& cost,
                                   double lambda, std::span<const double> r_grid,
                                   unsigned threads) {
  if (r_grid.empty()) throw ValidationError("r_grid", "must not be empty");
  if (!(lambda >= 0.0)) throw ValidationError("lambda", "must be nonnegative");
  HeuristicResult out;
  out.frontier = threshold_frontier(pp, cost, r_grid, threads);
  std::size_t best = 0;
  double best_g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.frontier.size(); ++i) {
    const auto& f = out.frontier[i];
    const double g = f.expected_cost + lambda * f.expected_relays;
    if (g < best_g) {
      best_g = g;
      best = i;
    }
  }
  out.r_th = r_grid[best];
  out.set = distance_set(out.r_th, domain_for(pp));
  out.evaluation = eval_cost(out.set, pp, cost, lambda);
  return out;
}

std::vector<double> default_threshold_grid(const PathParams& pp,
                                           const CostModel& cost, double lambda) {
  const auto r = solve_unconstrained(pp, cost, lambda);
  const auto& set = r.optimal_set;
  double diag = 0.0;
  switch (set.domain()) {
    case SetDomain::plane:
      diag = std::hypot(static_cast<double>(set.rows().front()),
                        static_cast<double>(set.n_max()));
      break;
    default:
      diag = static_cast<double>(set.rows().front());
  }
  return threshold_grid(diag + 2.0);
}

double mixed_frontier_cost(std::span<const ThresholdPoint> frontier, double rho) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(frontier.size());
  for (const auto& f : frontier) pts.emplace_back(f.expected_relays, f.expected_cost);
  std::sort(pts.begin(), pts.end());
  if (pts.empty() || rho < pts.front().first) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  // Lower hull, left to right.
  std::vector<std::pair<double, double>> hull;
  for (const auto& pt : pts) {
    if (!hull.empty() && hull.back().first == pt.first) continue;  // sorted: keep lower
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.first - a.first) * (pt.second - a.second) -
                           (b.second - a.second) * (pt.first - a.first);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  double best = hull.front().second;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (hull[i].first <= rho) {
      best = std::min(best, hull[i].second);
      if (i + 1 < hull.size() && hull[i + 1].first > rho) {
        const double w = (rho - hull[i].first) / (hull[i + 1].first - hull[i].first);
        best = std::min(best, (1 - w) * hull[i].second + w * hull[i + 1].second);
      }
    }
  }
  return best;
}

std::vector<FrontierRow> compare(const PathParams& pp, const CostModel& cost,
                                 std::span<const double> rho_grid,
                                 std::span<const double> r_grid, unsigned threads) {
  std::vector<FrontierRow> rows(rho_grid.size());
  if (rho_grid.empty()) return rows;
  std::vector<ConstrainedSolution> opt(rho_grid.size());
  parallel_for(
      rho_grid.size(),
      [&](std::size_t i) { opt[i] = solve_constrained(pp, cost, rho_grid[i]); },
      threads);

  std::vector<double> own_grid;
  if (r_grid.empty()) {
    // Wide enough to reach the sparsest optimal set used above.
    double diag = 0.0;
    for (const auto& s : opt) {
      const auto& set = s.set_under;
      const double d = set.domain() == SetDomain::plane
                           ? std::hypot(static_cast<double>(set.rows().front()),
                                        static_cast<double>(set.n_max()))
                           : static_cast<double>(set.rows().front());
      diag = std::max(diag, d);
    }
    own_grid = threshold_grid(2.0 * diag + 2.0);
    r_grid = own_grid;
  }
  const auto frontier = threshold_frontier(pp, cost, r_grid, threads);
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    rows[i] = FrontierRow{rho_grid[i], opt[i].achieved_cost,
                          mixed_frontier_cost(frontier, rho_grid[i])};
  }
  return rows;
}

}  // namespace relay
