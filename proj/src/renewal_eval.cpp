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

#include "relay/renewal_eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relay/numerics.hpp"

namespace relay {

namespace {

using numerics::CompensatedSum;

// C(top, k) (1-p)^cont q^m (1-q)^n.
double path_term(std::int64_t top, std::int64_t k, std::int64_t cont,
                 LatticePoint pt, const PathParams& pp) {
  if (top <= 30) {
    return numerics::binomial(top, k) * numerics::int_pow(1.0 - pp.p, cont) *
           numerics::int_pow(pp.q, pt.m) * numerics::int_pow(1.0 - pp.q, pt.n);
  }
  auto xlogy = [](std::int64_t count, long double x) -> long double {
    return count == 0 ? 0.0L : static_cast<long double>(count) * std::log(x);
  };
  const long double log_term =
      numerics::log_binomial_ext(top, k) +
      xlogy(cont, 1.0L - static_cast<long double>(pp.p)) +
      xlogy(pt.m, static_cast<long double>(pp.q)) +
      xlogy(pt.n, 1.0L - static_cast<long double>(pp.q));
  return static_cast<double>(std::exp(log_term));
}

void check_point(LatticePoint pt) {
  if (pt.m < 0 || pt.n < 0) {
    throw ValidationError("pt", "lattice coordinates must be nonnegative");
  }
}

void check_compatible(const PlacementSet& set, const PathParams& pp) {
  if (set.domain() == SetDomain::east_axis && pp.q != 1.0) {
    throw ValidationError("q", "an East-axis set needs q = 1");
  }
  if (set.domain() == SetDomain::north_axis && pp.q != 0.0) {
    throw ValidationError("q", "a North-axis set needs q = 0");
  }
}

// Row boundary of the set seen as a plane set. Axis sets only differ from
// their plane embedding on points the path cannot reach.
std::vector<std::int64_t> plane_rows(const PlacementSet& set) {
  const auto rows = set.rows();
  switch (set.domain()) {
    case SetDomain::east_axis:
      return {rows.front(), 0};
    case SetDomain::north_axis: {
      std::vector<std::int64_t> out(static_cast<std::size_t>(rows.front()), 1);
      out.push_back(0);
      return out;
    }
    case SetDomain::plane:
      break;
  }
  return {rows.begin(), rows.end()};
}

// Largest m + n with (1-p)^(m+n) above the smallest subnormal; anything
// further out contributes exact zeros.
std::int64_t reach_horizon(double p) {
  if (p >= 1.0) return 1;
  const double steps = -750.0 / std::log1p(-p);
  if (steps > 1e15) return std::int64_t{1} << 50;
  return static_cast<std::int64_t>(steps) + 1;
}

// Forward pass over the complement (row by row) and the boundary. For each
// complement point calls on_inner(pt, r, arrival) where arrival is the
// probability of stepping onto the point; for each boundary point calls
// on_boundary(pt, arrival).
template <class Inner, class Boundary>
void sweep(const PlacementSet& set, const PathParams& pp, Inner&& on_inner,
           Boundary&& on_boundary) {
  const auto rows = plane_rows(set);
  const double p = pp.p;
  const double q = pp.q;
  const std::int64_t horizon = reach_horizon(p);
  const auto n_max = static_cast<std::int64_t>(rows.size()) - 1;
  std::vector<double> prev;
  std::vector<double> cur;
  for (std::int64_t n = 0; n <= n_max && n <= horizon; ++n) {
    const std::int64_t width = rows[static_cast<std::size_t>(n)];
    const std::int64_t above = n == 0 ? 0 : rows[static_cast<std::size_t>(n - 1)];
    const std::int64_t lim = std::clamp<std::int64_t>(horizon - n + 1, 0, width);
    cur.assign(static_cast<std::size_t>(lim), 0.0);
    auto prev_at = [&](std::int64_t m) {
      return m < static_cast<std::int64_t>(prev.size())
                 ? prev[static_cast<std::size_t>(m)]
                 : 0.0;
    };
    for (std::int64_t m = 0; m < lim; ++m) {
      if (m == 0 && n == 0) {
        cur[0] = 1.0;
        on_inner(LatticePoint{0, 0}, 1.0, 0.0);
        continue;
      }
      const double west = m > 0 ? cur[static_cast<std::size_t>(m - 1)] : 0.0;
      const double south = n > 0 ? prev_at(m) : 0.0;
      const double arrival = q * west + (1.0 - q) * south;
      cur[static_cast<std::size_t>(m)] = (1.0 - p) * arrival;
      on_inner(LatticePoint{m, n}, (1.0 - p) * arrival, arrival);
    }
    const std::int64_t hi = n == 0 ? width : std::max(width, above - 1);
    for (std::int64_t m = width; m <= hi && m + n <= horizon; ++m) {
      double west = 0.0;
      if (m == width && m >= 1 && m - 1 < lim) {
        west = cur[static_cast<std::size_t>(m - 1)];
      }
      const double south = (n > 0 && m < above) ? prev_at(m) : 0.0;
      on_boundary(LatticePoint{m, n}, q * west + (1.0 - q) * south);
    }
    prev.swap(cur);
  }
}

}  // namespace

double reaching_prob(LatticePoint pt, const PathParams& pp) {
  check_point(pt);
  const std::int64_t s = pt.m + pt.n;
  return path_term(s, pt.m, s, pt, pp);
}

double ReachingTable::at(LatticePoint pt) const {
  if (pt.m < 0 || pt.n < 0) return 0.0;
  const auto n = static_cast<std::size_t>(pt.n);
  if (n >= rows_.size()) return 0.0;
  const auto m = static_cast<std::size_t>(pt.m);
  return m < rows_[n].size() ? rows_[n][m] : 0.0;
}

std::size_t ReachingTable::size() const {
  std::size_t total = 0;
  for (const auto& row : rows_) total += row.size();
  return total;
}

ReachingTable reaching_table(const PlacementSet& set, const PathParams& pp) {
  check_compatible(set, pp);
  const auto rows = plane_rows(set);
  std::vector<std::vector<double>> table(rows.size() - 1);
  for (std::size_t n = 0; n + 1 < rows.size(); ++n) {
    table[n].assign(static_cast<std::size_t>(rows[n]), 0.0);
  }
  sweep(
      set, pp,
      [&](LatticePoint pt, double r, double) {
        table[static_cast<std::size_t>(pt.n)][static_cast<std::size_t>(pt.m)] = r;
      },
      [](LatticePoint, double) {});
  return ReachingTable(std::move(table));
}

HitProbs hit_probs(const PlacementSet& set, LatticePoint pt,
                   const PathParams& pp) {
  check_point(pt);
  if ((set.domain() == SetDomain::east_axis && pt.n != 0) ||
      (set.domain() == SetDomain::north_axis && pt.m != 0)) {
    throw ValidationError("pt", "point is off the set's axis");
  }
  if (pt.is_origin()) return {};
  const std::int64_t s = pt.m + pt.n;
  if (!set.contains(pt)) {
    return {pp.p * path_term(s, pt.m, s - 1, pt, pp), 0.0};
  }
  const auto cls = boundary_class(set, pt);
  if (!cls) {
    std::ostringstream out;
    out << "(" << pt.m << ", " << pt.n
        << ") lies inside the placement set, off its boundary";
    throw ValidationError("pt", out.str());
  }
  std::int64_t top = s;
  std::int64_t k = pt.m;
  if (*cls == BoundaryClass::west) {
    top = s - 1;  // entered from the South only
  } else if (*cls == BoundaryClass::south) {
    top = s - 1;  // entered from the West only
    k = pt.m - 1;
  }
  return {pp.p * path_term(top, k, s - 1, pt, pp),
          path_term(top, k, s, pt, pp)};
}

namespace {

struct SweepSums {
  CompensatedSum end_cost;
  CompensatedSum cont_cost;
  CompensatedSum cont_hop;
  CompensatedSum end_mass;
  CompensatedSum cont_mass;
  CompensatedSum reach;
  CompensatedSum reach_increment;
};

SweepSums accumulate(const PlacementSet& set, const PathParams& pp,
                     const CostModel& cost, double lambda) {
  SweepSums sums;
  const double p = pp.p;
  sweep(
      set, pp,
      [&](LatticePoint pt, double r, double arrival) {
        sums.reach += r;
        sums.reach_increment += r * expected_increment(pt, pp.q, cost);
        if (arrival > 0.0) {
          const double end = p * arrival;
          sums.end_mass += end;
          sums.end_cost += end * cost.at(pt);
        }
      },
      [&](LatticePoint pt, double arrival) {
        if (arrival <= 0.0) return;
        const double d = cost.at(pt);
        const double end = p * arrival;
        const double cont = (1.0 - p) * arrival;
        sums.end_mass += end;
        sums.end_cost += end * d;
        sums.cont_mass += cont;
        sums.cont_cost += cont * (lambda + d);
        sums.cont_hop += cont * d;
      });
  return sums;
}

double residual_from(const SweepSums& sums, double g, const PathParams& pp,
                     const CostModel& cost, double lambda) {
  return sums.reach_increment.value() - pp.p * (lambda + g) * sums.reach.value() +
         cost.at(0, 0) + lambda;
}

}  // namespace

SetEvaluation eval_cost(const PlacementSet& set, const PathParams& pp,
                        const CostModel& cost, double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda", "must be nonnegative");
  check_compatible(set, pp);
  const SweepSums sums = accumulate(set, pp, cost, lambda);
  SetEvaluation out;
  out.lambda = lambda;
  out.continue_mass = sums.cont_mass.value();
  out.end_mass = sums.end_mass.value();
  if (!(out.continue_mass < 1.0)) {
    std::ostringstream out_msg;
    out_msg << "continuation mass " << out.continue_mass
            << " is not below 1; the set is not admissible";
    throw ConsistencyError(out_msg.str());
  }
  const double stay = 1.0 - out.continue_mass;
  out.g = (sums.end_cost.value() + sums.cont_cost.value()) / stay;
  out.expected_relays = out.continue_mass / stay;
  out.expected_cost = (sums.end_cost.value() + sums.cont_hop.value()) / stay;
  out.identity_residual = residual_from(sums, out.g, pp, cost, lambda);
  return out;
}

double identity_residual(const PlacementSet& set, double g,
                         const PathParams& pp, const CostModel& cost,
                         double lambda) {
  check_compatible(set, pp);
  const SweepSums sums = accumulate(set, pp, cost, lambda);
  return residual_from(sums, g, pp, cost, lambda);
}

}  // namespace relay
