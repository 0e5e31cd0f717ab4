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

#include "relay/placement_set.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace relay {

namespace {

// Largest index probed when looking for the first increment above a
// threshold. Beyond this the cost differences lose too much precision.
constexpr std::int64_t kSearchCap = std::int64_t{1} << 24;

// Least k in [start, kSearchCap] with reaches(k); reaches must be monotone.
std::int64_t least_reaching(const std::function<bool(std::int64_t)>& reaches,
                            std::int64_t start, const char* axis, double t) {
  if (reaches(start)) return start;
  if (!reaches(kSearchCap)) {
    std::ostringstream out;
    out << "expected increment along the " << axis << " axis stays below t = "
        << t << "; the complement of the placement set would be infinite";
    throw DivergenceError(out.str());
  }
  std::int64_t lo = start;  // !reaches(lo)
  std::int64_t hi = start + 1;
  while (!reaches(hi)) {
    lo = hi;
    hi = std::min(kSearchCap, 2 * hi);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (reaches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void check_threshold(double t, double q) {
  if (!(t > 0.0)) throw ValidationError("t", "threshold must be positive");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("q", "must lie in [0, 1]");
}

}  // namespace

std::string to_string(SetDomain domain) {
  switch (domain) {
    case SetDomain::plane: return "plane";
    case SetDomain::east_axis: return "east";
    case SetDomain::north_axis: return "north";
  }
  return "plane";
}

std::string to_string(SetFamily family) {
  switch (family) {
    case SetFamily::threshold: return "threshold";
    case SetFamily::distance: return "distance";
    case SetFamily::custom: return "custom";
  }
  return "custom";
}

PlacementSet PlacementSet::from_rows(std::vector<std::int64_t> m_star,
                                     double threshold, SetFamily family) {
  if (m_star.empty() || m_star.front() < 1) {
    throw StructureError("placement set rows must start with m*(0) >= 1");
  }
  const auto first_zero = std::find(m_star.begin(), m_star.end(), 0);
  if (first_zero == m_star.end()) {
    m_star.push_back(0);
  } else {
    m_star.erase(first_zero + 1, m_star.end());
  }
  for (std::size_t n = 1; n < m_star.size(); ++n) {
    if (m_star[n] < 0 || m_star[n] > m_star[n - 1]) {
      std::ostringstream out;
      out << "placement set boundary must be non-increasing; m*(" << n
          << ") = " << m_star[n] << " after m*(" << n - 1
          << ") = " << m_star[n - 1];
      throw StructureError(out.str());
    }
  }
  PlacementSet set;
  set.domain_ = SetDomain::plane;
  set.family_ = family;
  set.threshold_ = threshold;
  set.rows_ = std::move(m_star);
  return set;
}

PlacementSet PlacementSet::on_axis(SetDomain axis, std::int64_t threshold_index,
                                   double threshold, SetFamily family) {
  if (axis == SetDomain::plane) {
    throw StructureError("on_axis requires the east or north axis");
  }
  if (threshold_index < 1) {
    throw StructureError("axis threshold must be at least 1");
  }
  PlacementSet set;
  set.domain_ = axis;
  set.family_ = family;
  set.threshold_ = threshold;
  set.rows_ = {threshold_index};
  return set;
}

bool PlacementSet::contains(LatticePoint pt) const {
  if (pt.m < 0 || pt.n < 0 || pt.is_origin()) return false;
  switch (domain_) {
    case SetDomain::east_axis:
      return pt.m >= rows_.front();
    case SetDomain::north_axis:
      return pt.n >= rows_.front();
    case SetDomain::plane:
      break;
  }
  const auto row = static_cast<std::size_t>(pt.n);
  return row >= rows_.size() || pt.m >= rows_[row];
}

std::int64_t PlacementSet::m_star(std::int64_t n) const {
  switch (domain_) {
    case SetDomain::east_axis:
      return rows_.front();
    case SetDomain::north_axis:
      return n >= rows_.front() ? 0 : kUnbounded;
    case SetDomain::plane:
      break;
  }
  const auto row = static_cast<std::size_t>(n);
  return row < rows_.size() ? rows_[row] : 0;
}

std::int64_t PlacementSet::n_max() const {
  switch (domain_) {
    case SetDomain::east_axis: return 0;
    case SetDomain::north_axis: return rows_.front();
    case SetDomain::plane: break;
  }
  return static_cast<std::int64_t>(rows_.size()) - 1;
}

std::int64_t PlacementSet::complement_size() const {
  if (domain_ != SetDomain::plane) return rows_.front();
  std::int64_t total = 0;
  for (auto m : rows_) total += m;
  return total;
}

std::int64_t PlacementSet::complement_depth() const {
  if (domain_ != SetDomain::plane) return rows_.front() - 1;
  std::int64_t depth = 0;
  for (std::size_t n = 0; n + 1 < rows_.size(); ++n) {
    depth = std::max(depth, rows_[n] - 1 + static_cast<std::int64_t>(n));
  }
  return depth;
}

std::vector<LatticePoint> PlacementSet::complement_points() const {
  std::vector<LatticePoint> points;
  points.reserve(static_cast<std::size_t>(complement_size()));
  if (domain_ == SetDomain::east_axis) {
    for (std::int64_t m = 0; m < rows_.front(); ++m) points.push_back({m, 0});
    return points;
  }
  if (domain_ == SetDomain::north_axis) {
    for (std::int64_t n = 0; n < rows_.front(); ++n) points.push_back({0, n});
    return points;
  }
  const std::int64_t depth = complement_depth();
  const std::int64_t rows = n_max();
  for (std::int64_t s = 0; s <= depth; ++s) {
    for (std::int64_t n = 0; n <= std::min(s, rows - 1); ++n) {
      const std::int64_t m = s - n;
      if (m < rows_[static_cast<std::size_t>(n)]) points.push_back({m, n});
    }
  }
  return points;
}

bool PlacementSet::complement_within(const PlacementSet& other) const {
  if (domain_ != other.domain_) return false;
  if (domain_ != SetDomain::plane) return rows_.front() <= other.rows_.front();
  for (std::size_t n = 0; n < rows_.size(); ++n) {
    if (rows_[n] > other.m_star(static_cast<std::int64_t>(n))) return false;
  }
  return true;
}

bool contains(const PlacementSet& set, LatticePoint pt) {
  return set.contains(pt);
}

namespace {

bool on_domain(const PlacementSet& set, LatticePoint pt) {
  if (pt.m < 0 || pt.n < 0) return false;
  switch (set.domain()) {
    case SetDomain::east_axis: return pt.n == 0;
    case SetDomain::north_axis: return pt.m == 0;
    case SetDomain::plane: return true;
  }
  return true;
}

// In-lattice, in-domain neighbour lies in the complement.
bool complement_neighbour(const PlacementSet& set, LatticePoint pt) {
  return on_domain(set, pt) && !set.contains(pt);
}

bool is_boundary(const PlacementSet& set, LatticePoint pt) {
  if (!on_domain(set, pt) || !set.contains(pt)) return false;
  return complement_neighbour(set, {pt.m - 1, pt.n}) ||
         complement_neighbour(set, {pt.m, pt.n - 1});
}

}  // namespace

std::optional<BoundaryClass> boundary_class(const PlacementSet& set,
                                            LatticePoint pt) {
  if (!is_boundary(set, pt)) return std::nullopt;
  if (is_boundary(set, {pt.m - 1, pt.n})) return BoundaryClass::west;
  if (is_boundary(set, {pt.m, pt.n - 1})) return BoundaryClass::south;
  return BoundaryClass::null;
}

BoundaryPartition boundary_partition(const PlacementSet& set) {
  BoundaryPartition out;
  auto add = [&](LatticePoint pt) {
    const auto cls = boundary_class(set, pt);
    if (!cls) return;
    switch (*cls) {
      case BoundaryClass::west: out.west.push_back(pt); break;
      case BoundaryClass::south: out.south.push_back(pt); break;
      case BoundaryClass::null: out.null_pts.push_back(pt); break;
    }
  };
  if (set.domain() == SetDomain::east_axis) {
    add({set.rows().front(), 0});
    return out;
  }
  if (set.domain() == SetDomain::north_axis) {
    add({0, set.rows().front()});
    return out;
  }
  for (std::int64_t n = 0; n <= set.n_max(); ++n) {
    const std::int64_t lo = set.m_star(n);
    const std::int64_t hi = n == 0 ? lo : std::max(lo, set.m_star(n - 1) - 1);
    for (std::int64_t m = lo; m <= hi; ++m) add({m, n});
  }
  return out;
}

PlacementSet build_set(double t, double q, const CostModel& cost) {
  check_threshold(t, q);
  auto dq = [&](std::int64_t m, std::int64_t n) {
    return expected_increment({m, n}, q, cost);
  };
  const bool guarded = dq(0, 0) >= t;

  if (q == 1.0 || q == 0.0) {
    const bool east = q == 1.0;
    const std::int64_t k = least_reaching(
        [&](std::int64_t i) { return east ? dq(i, 0) >= t : dq(0, i) >= t; },
        1, east ? "East" : "North", t);
    auto set = PlacementSet::on_axis(
        east ? SetDomain::east_axis : SetDomain::north_axis, k, t,
        SetFamily::threshold);
    set.set_origin_guard(guarded);
    return set;
  }

  const std::int64_t first = least_reaching(
      [&](std::int64_t m) { return dq(m, 0) >= t; }, 0, "East", t);
  // Rows end once D_q(0, n) >= t; make sure that happens.
  least_reaching([&](std::int64_t n) { return dq(0, n) >= t; }, 0, "North", t);

  std::vector<std::int64_t> rows{std::max<std::int64_t>(first, 1)};
  std::int64_t m = first;
  for (std::int64_t n = 1; m > 0; ++n) {
    while (m > 0 && dq(m - 1, n) >= t) --m;
    rows.push_back(m);
  }
  auto set = PlacementSet::from_rows(std::move(rows), t, SetFamily::threshold);
  set.set_origin_guard(guarded);
  return set;
}

std::pair<std::int64_t, std::int64_t> bounding_box(double t, double q,
                                                   const CostModel& cost) {
  check_threshold(t, q);
  auto dq = [&](std::int64_t m, std::int64_t n) {
    return expected_increment({m, n}, q, cost);
  };
  std::int64_t m_extent = 0;
  std::int64_t n_extent = 0;
  if (q > 0.0) {
    m_extent = least_reaching([&](std::int64_t m) { return dq(m, 0) >= t; }, 0,
                              "East", t);
  }
  if (q < 1.0) {
    n_extent = least_reaching([&](std::int64_t n) { return dq(0, n) >= t; }, 0,
                              "North", t);
  }
  return {m_extent, n_extent};
}

}  // namespace relay
