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

#include "relay/mdp_solver.hpp"

#include <algorithm>
#include <cmath>
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

// Staircase of row lengths, stored flat.
struct Domain {
  std::vector<std::int64_t> len;
  std::vector<std::size_t> start;
  std::size_t size = 0;

  explicit Domain(std::vector<std::int64_t> lengths) : len(std::move(lengths)) {
    start.reserve(len.size());
    for (auto l : len) {
      start.push_back(size);
      size += static_cast<std::size_t>(l);
    }
  }
  bool contains(std::int64_t m, std::int64_t n) const {
    return n >= 0 && m >= 0 && n < static_cast<std::int64_t>(len.size()) &&
           m < len[static_cast<std::size_t>(n)];
  }
  std::size_t index(std::int64_t m, std::int64_t n) const {
    return start[static_cast<std::size_t>(n)] + static_cast<std::size_t>(m);
  }
};

// Points with D_q below t_dom, as row lengths.
Domain below_threshold(double t_dom, double q, const CostModel& cost) {
  const PlacementSet set = build_set(t_dom, q, cost);
  const auto rows = set.rows();
  switch (set.domain()) {
    case SetDomain::east_axis:
      return Domain({rows.front()});
    case SetDomain::north_axis:
      return Domain(std::vector<std::int64_t>(static_cast<std::size_t>(rows.front()), 1));
    case SetDomain::plane:
      break;
  }
  return Domain(std::vector<std::int64_t>(rows.begin(), rows.end() - 1));
}

}  // namespace

bool ValueTable::in_domain(LatticePoint pt) const {
  if (pt.m < 0 || pt.n < 0) return false;
  const auto n = static_cast<std::size_t>(pt.n);
  return n < rows.size() && static_cast<std::size_t>(pt.m) < rows[n].size();
}

double ValueTable::at(LatticePoint pt) const {
  if (in_domain(pt)) {
    return rows[static_cast<std::size_t>(pt.n)][static_cast<std::size_t>(pt.m)];
  }
  if (horizon != 0 || pt.m < 0 || pt.n < 0) {
    std::ostringstream out;
    out << "(" << pt.m << ", " << pt.n << ") is outside the value table";
    throw ValidationError("pt", out.str());
  }
  return lambda + cost.at(pt) + continuation;
}

std::int64_t ValueTable::state_count() const {
  std::int64_t total = 0;
  for (const auto& row : rows) total += static_cast<std::int64_t>(row.size());
  return total;
}

ValueTable finite_horizon_values(int horizon, const PathParams& pp,
                                 const CostModel& cost, double lambda,
                                 std::int64_t max_m, std::int64_t max_n) {
  check_inputs(pp, lambda);
  if (horizon < 1) throw ValidationError("horizon", "must be at least 1");
  if (max_m < 1 || max_n < 1) {
    throw ValidationError("grid", "grid must reach (1, 0) and (0, 1)");
  }
  const double p = pp.p;
  const double q = pp.q;
  const double d1 = cost.at(1, 0);
  // Stage k lives on [0, max_m + K - k] x [0, max_n + K - k].
  auto width = [&](int k) { return max_m + horizon - k + 1; };
  auto height = [&](int k) { return max_n + horizon - k + 1; };

  std::vector<double> prev;
  std::vector<double> cur;
  double continuation = 0.0;
  for (int k = 1; k <= horizon; ++k) {
    const std::int64_t w = width(k);
    const std::int64_t h = height(k);
    const std::int64_t pw = k == 1 ? 0 : width(k - 1);
    cur.assign(static_cast<std::size_t>(w * h), 0.0);
    auto prev_at = [&](std::int64_t m, std::int64_t n) {
      return prev[static_cast<std::size_t>(n * pw + m)];
    };
    double r = d1;
    if (k > 1) {
      r = (1 - p) * q * prev_at(1, 0) + (1 - p) * (1 - q) * prev_at(0, 1) + p * d1;
    }
    continuation = r;
    for (std::int64_t n = 0; n < h; ++n) {
      for (std::int64_t m = 0; m < w; ++m) {
        const double d_east = cost.at(m + 1, n);
        const double d_north = cost.at(m, n + 1);
        const double place = lambda + cost.at(m, n) + r;
        double skip = 0.0;
        if (k == 1) {
          skip = q * d_east + (1 - q) * d_north;
        } else {
          skip = (1 - p) * q * prev_at(m + 1, n) + p * q * d_east +
                 (1 - p) * (1 - q) * prev_at(m, n + 1) + p * (1 - q) * d_north;
        }
        cur[static_cast<std::size_t>(n * w + m)] = std::min(place, skip);
      }
    }
    prev.swap(cur);
  }
  ValueTable table;
  table.horizon = horizon;
  table.lambda = lambda;
  table.pp = pp;
  table.cost = cost;
  table.continuation = continuation;
  const std::int64_t w = width(horizon);
  table.rows.resize(static_cast<std::size_t>(max_n + 1));
  for (std::int64_t n = 0; n <= max_n; ++n) {
    auto& row = table.rows[static_cast<std::size_t>(n)];
    row.assign(prev.begin() + n * w, prev.begin() + n * w + max_m + 1);
  }
  return table;
}

ValueTable value_iteration(const PathParams& pp, const CostModel& cost,
                           double lambda, const ValueIterationOptions& options) {
  check_inputs(pp, lambda);
  if (!(options.tol > 0.0)) throw ValidationError("tol", "must be positive");
  if (!(options.domain_margin > 1.0)) {
    throw ValidationError("domain_margin", "must exceed 1");
  }
  const double p = pp.p;
  const double q = pp.q;
  const double w_e = (1 - p) * q;
  const double w_n = (1 - p) * (1 - q);
  const double d1 = cost.at(1, 0);
  // Keep (1, 0) and (0, 1) inside the domain so R never refers to itself.
  double seed = std::max(p * lambda, expected_increment({0, 0}, q, cost));
  if (q > 0) seed = std::max(seed, expected_increment({1, 0}, q, cost));
  if (q < 1) seed = std::max(seed, expected_increment({0, 1}, q, cost));
  double t_dom = options.domain_margin * seed;
  // Sup-norm change that guarantees the requested distance to the fixed point.
  const double target = options.tol * p / (1 - p);

  std::vector<double> j_prev;
  Domain prev_domain({});
  for (int round = 0; round < 64; ++round) {
    Domain dom = below_threshold(t_dom, q, cost);
    const auto rows = static_cast<std::int64_t>(dom.len.size());
    std::vector<double> cp_base(dom.size);
    std::vector<double> cnp_const(dom.size);
    std::vector<double> j(dom.size, 0.0);
    for (std::int64_t n = 0; n < rows; ++n) {
      for (std::int64_t m = 0; m < dom.len[static_cast<std::size_t>(n)]; ++m) {
        const std::size_t i = dom.index(m, n);
        const double d_east = cost.at(m + 1, n);
        const double d_north = cost.at(m, n + 1);
        cp_base[i] = lambda + cost.at(m, n);
        double c = p * q * d_east + p * (1 - q) * d_north;
        // Off the domain a relay is placed: J = lambda + d + R. The R part is
        // added per sweep.
        if (!dom.contains(m + 1, n)) c += w_e * (lambda + d_east);
        if (!dom.contains(m, n + 1)) c += w_n * (lambda + d_north);
        cnp_const[i] = c;
        if (prev_domain.contains(m, n)) j[i] = j_prev[prev_domain.index(m, n)];
      }
    }
    const bool has_east = dom.contains(1, 0);
    const bool has_north = dom.contains(0, 1);
    const std::size_t i10 = has_east ? dom.index(1, 0) : 0;
    const std::size_t i01 = has_north ? dom.index(0, 1) : 0;
    std::vector<double> next(dom.size);
    std::int64_t iterations = 0;
    double change = 0.0;
    double r = 0.0;
    do {
      if (iterations >= options.max_iterations) {
        std::ostringstream out;
        out << "value iteration did not converge in " << iterations
            << " sweeps; last change " << change;
        throw ConvergenceError(out.str());
      }
      r = (has_east ? w_e * j[i10] : 0.0) + (has_north ? w_n * j[i01] : 0.0) +
          p * d1;
      change = 0.0;
      for (std::int64_t n = 0; n < rows; ++n) {
        const std::int64_t len = dom.len[static_cast<std::size_t>(n)];
        const std::size_t base = dom.start[static_cast<std::size_t>(n)];
        const bool upper = n + 1 < rows;
        const std::int64_t up_len = upper ? dom.len[static_cast<std::size_t>(n + 1)] : 0;
        const std::size_t up_base = upper ? dom.start[static_cast<std::size_t>(n + 1)] : 0;
        for (std::int64_t m = 0; m < len; ++m) {
          const std::size_t i = base + static_cast<std::size_t>(m);
          const double east = m + 1 < len ? j[i + 1] : r;
          const double north = m < up_len ? j[up_base + static_cast<std::size_t>(m)] : r;
          const double skip = cnp_const[i] + w_e * east + w_n * north;
          const double val = std::min(cp_base[i] + r, skip);
          change = std::max(change, std::abs(val - j[i]));
          next[i] = val;
        }
      }
      j.swap(next);
      ++iterations;
    } while (change > target);

    const double j00 = j[0];
    const double needed = options.domain_margin * p * (lambda + j00);
    if (t_dom >= needed || round == 63) {
      ValueTable table;
      table.horizon = 0;
      table.residual = change;
      table.error_bound = change * (1 - p) / p;
      table.iterations = iterations;
      table.lambda = lambda;
      table.continuation =
          (has_east ? w_e * j[i10] : 0.0) + (has_north ? w_n * j[i01] : 0.0) + p * d1;
      table.domain_threshold = t_dom;
      table.pp = pp;
      table.cost = cost;
      table.rows.resize(static_cast<std::size_t>(rows));
      for (std::int64_t n = 0; n < rows; ++n) {
        const auto b = j.begin() + static_cast<std::ptrdiff_t>(dom.start[static_cast<std::size_t>(n)]);
        table.rows[static_cast<std::size_t>(n)].assign(b, b + dom.len[static_cast<std::size_t>(n)]);
      }
      if (t_dom < needed) {
        log::warn("value iteration domain still below the placement threshold");
      }
      return table;
    }
    t_dom = needed;
    j_prev = std::move(j);
    prev_domain = std::move(dom);
  }
  throw ConvergenceError("value iteration domain did not settle");
}

BranchCosts branch_costs(const ValueTable& v, LatticePoint pt) {
  if (v.horizon != 0) {
    throw ValidationError("horizon", "branch costs need an infinite-horizon table");
  }
  const double p = v.pp.p;
  const double q = v.pp.q;
  BranchCosts out;
  out.place = v.lambda + v.cost.at(pt) + v.continuation;
  const LatticePoint east{pt.m + 1, pt.n};
  const LatticePoint north{pt.m, pt.n + 1};
  out.skip = p * q * v.cost.at(east) + p * (1 - q) * v.cost.at(north);
  if (q > 0) out.skip += (1 - p) * q * v.at(east);
  if (q < 1) out.skip += (1 - p) * (1 - q) * v.at(north);
  return out;
}

PlacementSet bellman_placement_set(const ValueTable& v, double tie_tol) {
  if (v.horizon != 0) {
    throw ValidationError("horizon", "placement sets need an infinite-horizon table");
  }
  const double j00 = v.at({0, 0});
  if (tie_tol < 0) {
    tie_tol = 10.0 * v.error_bound + 1e-13 * (1.0 + v.lambda + j00);
  }
  auto place = [&](std::int64_t m, std::int64_t n) {
    const auto c = branch_costs(v, {m, n});
    return c.place <= c.skip + tie_tol;
  };
  const double threshold = v.pp.p * (v.lambda + j00);
  std::vector<std::int64_t> m_star;
  m_star.reserve(v.rows.size());
  for (std::size_t n = 0; n < v.rows.size(); ++n) {
    const auto len = static_cast<std::int64_t>(v.rows[n].size());
    std::int64_t first = len;
    for (std::int64_t m = 0; m < len; ++m) {
      const bool here = place(m, static_cast<std::int64_t>(n));
      if (here && first == len) first = m;
      if (!here && first != len) {
        std::ostringstream out;
        out << "Bellman placement set is not upward closed in row " << n
            << ": place at m = " << first << " but not at m = " << m;
        throw StructureError(out.str());
      }
    }
    m_star.push_back(first);
  }
  const double q = v.pp.q;
  if (q == 1.0) {
    return PlacementSet::on_axis(SetDomain::east_axis, m_star.front(), threshold,
                                 SetFamily::threshold);
  }
  if (q == 0.0) {
    // One state per row; the first placed row is the threshold.
    std::int64_t k = static_cast<std::int64_t>(m_star.size());
    for (std::size_t n = 0; n < m_star.size(); ++n) {
      if (m_star[n] == 0) {
        k = static_cast<std::int64_t>(n);
        break;
      }
    }
    for (std::size_t n = static_cast<std::size_t>(k); n < m_star.size(); ++n) {
      if (m_star[n] != 0) throw StructureError("Bellman set is not a North-axis threshold");
    }
    return PlacementSet::on_axis(SetDomain::north_axis, k, threshold,
                                 SetFamily::threshold);
  }
  m_star.push_back(0);
  return PlacementSet::from_rows(std::move(m_star), threshold, SetFamily::threshold);
}

namespace {

std::string first_difference(const PlacementSet& a, const PlacementSet& b) {
  std::ostringstream out;
  if (a.domain() != b.domain()) {
    out << "domains differ: " << to_string(a.domain()) << " vs "
        << to_string(b.domain());
    return out.str();
  }
  const std::int64_t rows = std::max(a.n_max(), b.n_max());
  for (std::int64_t n = 0; n <= rows; ++n) {
    if (a.m_star(n) != b.m_star(n)) {
      out << "m*(" << n << ") differs: " << a.m_star(n) << " vs " << b.m_star(n);
      return out.str();
    }
  }
  return "sets equal";
}

}  // namespace

EquivalenceReport verify_osla_equivalence(const PathParams& pp,
                                          const CostModel& cost, double lambda,
                                          double tol) {
  EquivalenceReport report;
  const SolveResult osla = solve_unconstrained(pp, cost, lambda);
  ValueIterationOptions options;
  options.tol = tol;
  const ValueTable v = value_iteration(pp, cost, lambda, options);
  report.g_star = osla.g_star;
  report.j00 = v.at({0, 0});
  report.value_gap = std::abs(report.j00 - report.g_star);
  report.osla_set = osla.optimal_set;
  try {
    report.bellman_set = bellman_placement_set(v);
  } catch (const StructureError& e) {
    report.detail = e.what();
    return report;
  }
  report.sets_equal = report.bellman_set == report.osla_set;
  report.passed = report.sets_equal && report.value_gap <= 10.0 * tol;
  std::ostringstream out;
  out << first_difference(report.osla_set, report.bellman_set)
      << "; |J(0,0) - g*| = " << report.value_gap;
  report.detail = out.str();
  return report;
}

}  // namespace relay
