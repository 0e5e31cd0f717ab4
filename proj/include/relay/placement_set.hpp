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

#ifndef RELAY_PLACEMENT_SET_HPP
#define RELAY_PLACEMENT_SET_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relay/core_model.hpp"

namespace relay {

/// Part of the lattice a set is defined on. Corridors with q == 1 (q == 0)
/// never leave the East (North) axis, so their sets live on that axis alone.
enum class SetDomain { plane, east_axis, north_axis };

/// How a set was produced; informational only, equality ignores it.
enum class SetFamily { threshold, distance, custom };

std::string to_string(SetDomain domain);
std::string to_string(SetFamily family);

/**
 * An upward-closed placement set with a finite, downward-closed complement
 * that contains the origin.
 *
 * Plane sets are stored as the row boundary m*(n) for n = 0..n_max, where
 * m*(n) is the least m with (m, n) in the set and n_max is the first row with
 * m*(n) == 0; all later rows start at m = 0. The origin is never a member.
 *
 * Axis sets store a single threshold K: the set is {m >= K} on the East axis
 * (any n) or {n >= K} on the North axis (any m).
 */
class PlacementSet {
 public:
  static constexpr std::int64_t kUnbounded =
      std::numeric_limits<std::int64_t>::max();

  /// The smallest admissible set: everything but the origin.
  PlacementSet() = default;

  /// Builds a plane set from its row boundary. Trailing rows after the first
  /// zero are dropped; a missing zero row is appended. Throws StructureError
  /// unless the rows are non-increasing with m*(0) >= 1.
  static PlacementSet from_rows(std::vector<std::int64_t> m_star,
                                double threshold = 0.0,
                                SetFamily family = SetFamily::custom);

  /// {m >= K} (east_axis) or {n >= K} (north_axis), K >= 1.
  static PlacementSet on_axis(SetDomain axis, std::int64_t threshold_index,
                              double threshold = 0.0,
                              SetFamily family = SetFamily::custom);

  bool contains(LatticePoint pt) const;
  bool in_complement(LatticePoint pt) const { return !contains(pt); }

  SetDomain domain() const { return domain_; }
  SetFamily family() const { return family_; }
  double threshold() const { return threshold_; }
  bool origin_guard() const { return origin_guard_; }
  void set_origin_guard(bool guarded) { origin_guard_ = guarded; }

  /// Plane: the stored rows m*(0..n_max). Axis: the single threshold K.
  std::span<const std::int64_t> rows() const { return rows_; }

  /// m*(n). On the North axis rows below K return kUnbounded.
  std::int64_t m_star(std::int64_t n) const;

  /// Plane: first row with m*(n) == 0. East axis: 0. North axis: K.
  std::int64_t n_max() const;

  /// Number of lattice points outside the set (within the domain).
  std::int64_t complement_size() const;

  /// Complement points in increasing m + n (then increasing n).
  std::vector<LatticePoint> complement_points() const;

  /// Largest m + n over the complement.
  std::int64_t complement_depth() const;

  /// True when the complements are nested: this one inside `other`'s.
  bool complement_within(const PlacementSet& other) const;

  friend bool operator==(const PlacementSet& a, const PlacementSet& b) {
    return a.domain_ == b.domain_ && a.rows_ == b.rows_;
  }

 private:
  SetDomain domain_ = SetDomain::plane;
  SetFamily family_ = SetFamily::custom;
  double threshold_ = 0.0;
  bool origin_guard_ = false;
  std::vector<std::int64_t> rows_{1, 0};
};

enum class BoundaryClass { west, south, null };

/**
 * Boundary points of a set, split by where a path can come from: `west`
 * points have their West neighbour on the boundary (so are entered only from
 * the South), `south` points symmetrically, `null_pts` from either side.
 */
struct BoundaryPartition {
  std::vector<LatticePoint> west;
  std::vector<LatticePoint> south;
  std::vector<LatticePoint> null_pts;

  std::size_t size() const { return west.size() + south.size() + null_pts.size(); }
};

/// Threshold set {(m, n) != (0, 0) : t <= q*D1(m,n) + (1-q)*D2(m,n)}.
/// Throws DivergenceError when the increments never reach t.
PlacementSet build_set(double t, double q, const CostModel& cost);

bool contains(const PlacementSet& set, LatticePoint pt);

/// Class of a boundary point; nullopt for points in the interior of the set,
/// in its complement, or off the set's domain.
std::optional<BoundaryClass> boundary_class(const PlacementSet& set,
                                            LatticePoint pt);

BoundaryPartition boundary_partition(const PlacementSet& set);

/// Least M with D_q(M, 0) >= t and least N with D_q(0, N) >= t. For q == 1
/// (q == 0) the orthogonal extent is reported as 0.
std::pair<std::int64_t, std::int64_t> bounding_box(double t, double q,
                                                   const CostModel& cost);

}  // namespace relay

#endif  // RELAY_PLACEMENT_SET_HPP
