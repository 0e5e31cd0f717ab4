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

#include "relay/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "relay/heuristic_policy.hpp"
#include "relay/mdp_solver.hpp"
#include "relay/osla_solver.hpp"
#include "relay/renewal_eval.hpp"
#include "relay/simulator.hpp"

namespace relay {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

namespace {

template <typename... Parts>
std::string text(const Parts&... parts) {
  std::ostringstream out;
  out.precision(12);
  (out << ... << parts);
  return out.str();
}

// Random staircase inside [1, max_m] with at most max_rows rows.
PlacementSet random_set(std::mt19937_64& rng, std::int64_t max_m, std::int64_t max_rows) {
  std::uniform_int_distribution<std::int64_t> first(1, max_m);
  std::uniform_int_distribution<std::int64_t> rows_count(1, max_rows);
  std::vector<std::int64_t> rows{first(rng)};
  const auto count = rows_count(rng);
  for (std::int64_t n = 1; n < count && rows.back() > 0; ++n) {
    std::uniform_int_distribution<std::int64_t> next(0, rows.back());
    rows.push_back(next(rng));
  }
  return PlacementSet::from_rows(std::move(rows));
}

CheckResult identity_check(const PlacementSet& set, const PathParams& pp,
                           const CostModel& cost, double lambda, const std::string& what) {
  const auto ev = eval_cost(set, pp, cost, lambda);
  const double mass = ev.end_mass + ev.continue_mass;
  const bool ok = std::abs(ev.identity_residual) <= 1e-8 * (1 + ev.g) &&
                  std::abs(mass - 1.0) <= 1e-10;
  return {"renewal_identity_" + what, ok,
          text("residual=", ev.identity_residual, " mass=", mass)};
}

}  // namespace

VerifyReport run_verification(const PathParams& pp, const CostParams& params,
                              double lambda, const VerifyOptions& options) {
  pp.require_solvable();
  (void)RelayPrice(lambda);
  const CostModel cost(params);
  VerifyReport report;
  auto add = [&](CheckResult c) { report.checks.push_back(std::move(c)); };

  const auto conditions = validate_cost_model(cost, 50);
  for (const auto& c : conditions.checks) {
    // Linear costs fail the increment check by construction; report, not fail.
    const bool informative = c.name == "lemma2_monotone_increments" && params.eta == 1.0;
    add({"cost_" + c.name, c.passed || informative, c.detail});
  }

  const auto solved = solve_unconstrained(pp, cost, lambda);
  const double g = solved.g_star;
  {
    bool strict = true;
    for (std::size_t k = 2; k + 1 < solved.trace.size(); ++k) {
      strict = strict && solved.trace[k] < solved.trace[k - 1];
    }
    add({"fixed_point_trace", strict && solved.iterations <= 10,
         text("iterations=", solved.iterations, " g*=", g)});
  }

  const auto eq = verify_osla_equivalence(pp, cost, lambda);
  add({"osla_equals_bellman", eq.passed, eq.detail});

  {
    const double h_max = 3.0 * g + 1.0;
    const auto scan = grid_scan(pp, cost, lambda, h_max, h_max / 200.0);
    bool below = true;
    for (int i = 1; i <= 20; ++i) {
      const double h = g + (h_max - g) * i / 20.0;
      below = below && evaluate_h(pp, cost, lambda, h).g < h;
    }
    add({"grid_scan_single_crossing", scan.diagonal_crossings == 1 && below,
         text("crossings=", scan.diagonal_crossings, " g_min=", scan.g_min)});
  }

  add(identity_check(solved.optimal_set, pp, cost, lambda, "optimal"));
  if (domain_for(pp) == SetDomain::plane) {
    std::mt19937_64 rng(options.seed);
    for (int i = 0; i < options.random_sets; ++i) {
      add(identity_check(random_set(rng, 40, 40), pp, cost, lambda,
                         text("random_", i)));
    }
  }

  {
    bool monotone = true;
    std::string where;
    for (int k : {1, 2, 5, 20}) {
      const auto v = finite_horizon_values(k, pp, cost, lambda, 25, 25);
      for (std::int64_t n = 0; n <= 25 && monotone; ++n) {
        for (std::int64_t m = 0; m <= 25 && monotone; ++m) {
          const double h = v.at({m, n}) - cost.at(m, n);
          const double slack = 1e-9 * (1 + std::abs(v.at({m, n})));
          if ((m < 25 && v.at({m + 1, n}) - cost.at(m + 1, n) < h - slack) ||
              (n < 25 && v.at({m, n + 1}) - cost.at(m, n + 1) < h - slack)) {
            monotone = false;
            where = text("K=", k, " at (", m, ",", n, ")");
          }
        }
      }
    }
    add({"finite_horizon_h_monotone", monotone, where});
  }

  if (pp.q != 0.5) {
    const auto mirror = solve_unconstrained(PathParams(pp.p, 1.0 - pp.q), cost, lambda);
    add({"q_symmetry", std::abs(mirror.g_star - g) <= 1e-9 * (1 + g),
         text("g*(q)=", g, " g*(1-q)=", mirror.g_star)});
  }

  {
    const auto grid = default_threshold_grid(pp, cost, lambda);
    const auto h = optimize_threshold(pp, cost, lambda, grid, options.threads);
    add({"heuristic_dominated", h.evaluation.g >= g - 1e-9 * (1 + g),
         text("g_heuristic=", h.evaluation.g, " r_th=", h.r_th)});
  }

  if (options.episodes > 0) {
    const auto mc = monte_carlo(Policy(solved.optimal_set), pp, cost, lambda,
                                options.episodes, options.seed, options.threads);
    const auto& ev = solved.final_evaluation();
    // Rare relays can go unseen; a few counts per run is the resolution floor.
    const double floor = 5.0 / static_cast<double>(options.episodes);
    const bool ok =
        std::abs(mc.mean_objective - g) <= 4 * mc.se_objective + floor * params.p_m &&
        std::abs(mc.mean_relays - ev.expected_relays) <= 4 * mc.se_relays + floor;
    add({"monte_carlo_agreement", ok,
         text("mean_objective=", mc.mean_objective, " se=", mc.se_objective,
              " mean_relays=", mc.mean_relays, " se=", mc.se_relays)});
  }
  return report;
}

}  // namespace relay
