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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "relay/placement_set.hpp"

namespace relay {
namespace {

const CostModel kQuad(CostParams{0.1, 0.01, 2.0});

using PointSet = std::set<std::pair<std::int64_t, std::int64_t>>;

PointSet as_set(const std::vector<LatticePoint>& pts) {
  PointSet out;
  for (const auto& pt : pts) out.insert({pt.m, pt.n});
  return out;
}

TEST(BuildSet, SmallThresholdExcludesOnlyOrigin) {
  const auto set = build_set(0.005, 0.5, kQuad);
  EXPECT_TRUE(set.origin_guard());
  EXPECT_EQ(set.complement_size(), 1);
  EXPECT_EQ(set.m_star(0), 1);
  EXPECT_EQ(set.n_max(), 1);
  EXPECT_FALSE(set.contains({0, 0}));
  EXPECT_TRUE(set.contains({1, 0}));
  EXPECT_TRUE(set.contains({0, 1}));
}

TEST(BuildSet, LineBoundary) {
  const auto set = build_set(0.082, 0.5, kQuad);
  EXPECT_FALSE(set.origin_guard());
  EXPECT_EQ(set.m_star(0), 8);
  EXPECT_EQ(set.n_max(), 8);
  for (std::int64_t n = 0; n <= 8; ++n) EXPECT_EQ(set.m_star(n), 8 - n);
  EXPECT_TRUE(contains(set, {8, 0}));
  EXPECT_FALSE(contains(set, {7, 0}));
  EXPECT_FALSE(contains(set, {0, 0}));
  EXPECT_TRUE(contains(set, {0, 12}));
}

TEST(BuildSet, LargeThresholdStaysFinite) {
  // 0.01 (m + n + 1) >= 10.
  const auto set = build_set(10.0, 0.5, kQuad);
  EXPECT_EQ(set.m_star(0), 999);
  EXPECT_EQ(set.n_max(), 999);
  EXPECT_EQ(set.m_star(500), 499);
}

TEST(BuildSet, RejectsBadThreshold) {
  EXPECT_THROW(build_set(0.0, 0.5, kQuad), ValidationError);
  EXPECT_THROW(build_set(-1.0, 0.5, kQuad), ValidationError);
  EXPECT_THROW(build_set(0.1, 1.5, kQuad), ValidationError);
}

TEST(BuildSet, LinearCostDivergesAboveGamma) {
  const CostModel linear(CostParams{0.1, 0.01, 1.0});
  EXPECT_THROW(build_set(0.02, 0.5, linear), DivergenceError);
  EXPECT_THROW(bounding_box(0.02, 1.0, linear), DivergenceError);
  EXPECT_NO_THROW(build_set(0.005, 0.5, linear));
}

TEST(BuildSet, DegenerateDirections) {
  const auto east = build_set(0.05, 1.0, kQuad);
  EXPECT_EQ(east.domain(), SetDomain::east_axis);
  EXPECT_EQ(east.rows().front(), 2);
  EXPECT_EQ(east.n_max(), 0);
  EXPECT_TRUE(east.contains({2, 0}));
  EXPECT_FALSE(east.contains({1, 0}));

  const auto north = build_set(0.05, 0.0, kQuad);
  EXPECT_EQ(north.domain(), SetDomain::north_axis);
  EXPECT_TRUE(north.contains({0, 2}));
  EXPECT_FALSE(north.contains({0, 1}));
  EXPECT_EQ(north.complement_size(), 2);
}

TEST(BuildSet, AxisSetAtTinyThresholdStartsAtOne) {
  const auto east = build_set(0.001, 1.0, kQuad);
  EXPECT_EQ(east.rows().front(), 1);
  EXPECT_TRUE(east.origin_guard());
}

TEST(BuildSet, MembershipMatchesDirectComparison) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> qd(0.05, 0.95);
  std::uniform_real_distribution<double> td(0.003, 1.5);
  for (double eta : {2.0, 2.5, 3.0}) {
    for (int trial = 0; trial < 15; ++trial) {
      const double q = qd(rng);
      const double t = td(rng);
      const CostModel cost(CostParams{0.1, 0.01, eta});
      const auto set = build_set(t, q, cost);
      const auto [mm, nn] = bounding_box(t, q, cost);
      for (std::int64_t m = 0; m <= mm + 3; ++m) {
        for (std::int64_t n = 0; n <= nn + 3; ++n) {
          const bool expected =
              !(m == 0 && n == 0) &&
              t <= oracle::expected_increment(m, n, q, 0.1, 0.01, eta);
          ASSERT_EQ(set.contains({m, n}), expected)
              << "eta=" << eta << " q=" << q << " t=" << t << " at " << m
              << "," << n;
        }
      }
      // The bounding box encloses the complement.
      for (const auto& pt : set.complement_points()) {
        EXPECT_LE(pt.m, mm);
        EXPECT_LE(pt.n, nn);
      }
    }
  }
}

TEST(BoundingBox, KnownExtents) {
  EXPECT_EQ(bounding_box(0.082, 0.5, kQuad), (std::pair<std::int64_t, std::int64_t>(8, 8)));
  EXPECT_EQ(bounding_box(0.01, 0.5, kQuad), (std::pair<std::int64_t, std::int64_t>(0, 0)));
  EXPECT_EQ(bounding_box(0.05, 1.0, kQuad), (std::pair<std::int64_t, std::int64_t>(2, 0)));
}

TEST(PlacementSet, FromRowsValidation) {
  EXPECT_THROW(PlacementSet::from_rows({}), StructureError);
  EXPECT_THROW(PlacementSet::from_rows({0}), StructureError);
  EXPECT_THROW(PlacementSet::from_rows({2, 3, 0}), StructureError);
  EXPECT_THROW(PlacementSet::from_rows({2, -1}), StructureError);
  const auto trimmed = PlacementSet::from_rows({3, 1, 0, 0, 0});
  EXPECT_EQ(trimmed.rows().size(), 3u);
  const auto padded = PlacementSet::from_rows({3, 1});
  EXPECT_EQ(padded.rows().size(), 3u);
  EXPECT_EQ(trimmed, padded);
  EXPECT_THROW(PlacementSet::on_axis(SetDomain::east_axis, 0), StructureError);
  EXPECT_THROW(PlacementSet::on_axis(SetDomain::plane, 3), StructureError);
}

TEST(PlacementSet, ComplementOrderAndClosure) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto set = PlacementSet::from_rows(oracle::random_rows(rng, 12, 10));
    const auto pts = set.complement_points();
    EXPECT_EQ(static_cast<std::int64_t>(pts.size()), set.complement_size());
    std::int64_t depth = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_FALSE(set.contains(pts[i]));
      depth = std::max(depth, pts[i].m + pts[i].n);
      if (i > 0) {
        const auto a = pts[i - 1];
        const auto b = pts[i];
        EXPECT_TRUE(a.m + a.n < b.m + b.n || (a.m + a.n == b.m + b.n && a.n < b.n));
      }
      // Downward closure.
      for (std::int64_t m = 0; m <= pts[i].m; ++m) {
        for (std::int64_t n = 0; n <= pts[i].n; ++n) {
          EXPECT_FALSE(set.contains({m, n}));
        }
      }
    }
    EXPECT_EQ(depth, set.complement_depth());
    // Upward closure on the boundary plus one step.
    for (std::int64_t n = 0; n <= set.n_max() + 1; ++n) {
      const LatticePoint first{set.m_star(n), n};
      if (first.is_origin()) continue;
      EXPECT_TRUE(set.contains(first));
      EXPECT_TRUE(set.contains({first.m + 1, n}));
      EXPECT_TRUE(set.contains({first.m, n + 1}));
    }
  }
}

// Boundary and its classes straight from the definitions.
struct BruteBoundary {
  PointSet all, west, south, null_pts;
};

BruteBoundary brute_boundary(const PlacementSet& set, std::int64_t extent) {
  auto in_b = [&](std::int64_t m, std::int64_t n) {
    if (!set.contains({m, n})) return false;
    return (m >= 1 && !set.contains({m - 1, n})) ||
           (n >= 1 && !set.contains({m, n - 1}));
  };
  BruteBoundary out;
  for (std::int64_t m = 0; m <= extent; ++m) {
    for (std::int64_t n = 0; n <= extent; ++n) {
      if (!in_b(m, n)) continue;
      out.all.insert({m, n});
      if (m >= 1 && in_b(m - 1, n)) {
        out.west.insert({m, n});
      } else if (n >= 1 && in_b(m, n - 1)) {
        out.south.insert({m, n});
      } else {
        out.null_pts.insert({m, n});
      }
    }
  }
  return out;
}

TEST(BoundaryPartition, LineSetIsAllNull) {
  const auto part = boundary_partition(build_set(0.082, 0.5, kQuad));
  EXPECT_TRUE(part.west.empty());
  EXPECT_TRUE(part.south.empty());
  ASSERT_EQ(part.null_pts.size(), 9u);
  for (const auto& pt : part.null_pts) EXPECT_EQ(pt.m + pt.n, 8);
}

TEST(BoundaryPartition, EastAxisSet) {
  const auto set = PlacementSet::on_axis(SetDomain::east_axis, 3);
  const auto part = boundary_partition(set);
  ASSERT_EQ(part.size(), 1u);
  EXPECT_EQ(part.null_pts.front(), (LatticePoint{3, 0}));
  EXPECT_EQ(boundary_class(set, {3, 0}), BoundaryClass::null);
  EXPECT_FALSE(boundary_class(set, {3, 1}).has_value());
}

TEST(BoundaryPartition, SmallestComplement) {
  const auto set = PlacementSet::from_rows({1});
  const auto part = boundary_partition(set);
  EXPECT_EQ(as_set(part.null_pts), (PointSet{{1, 0}, {0, 1}}));
  EXPECT_EQ(part.size(), 2u);
}

TEST(BoundaryPartition, StaircaseClasses) {
  // Complement rows 4, 2, 2, 1: (2,1) has its South neighbour in P^c and
  // its West neighbour in P^c; (3,1) has West neighbour (2,1) on B.
  const auto set = PlacementSet::from_rows({4, 2, 2, 1, 0});
  EXPECT_EQ(boundary_class(set, {2, 1}), BoundaryClass::null);
  EXPECT_EQ(boundary_class(set, {3, 1}), BoundaryClass::west);
  EXPECT_EQ(boundary_class(set, {1, 3}), BoundaryClass::null);
  EXPECT_EQ(boundary_class(set, {0, 4}), BoundaryClass::null);
  EXPECT_EQ(boundary_class(set, {4, 0}), BoundaryClass::null);
  EXPECT_FALSE(boundary_class(set, {4, 1}).has_value());
  EXPECT_FALSE(boundary_class(set, {0, 0}).has_value());
}

TEST(BoundaryPartition, SouthClassOnTallColumn) {
  // Rows 1, 1, 1, 0: (1, n) for n >= 1 sits above (1, n - 1) on B.
  const auto set = PlacementSet::from_rows({1, 1, 1, 0});
  EXPECT_EQ(boundary_class(set, {1, 0}), BoundaryClass::null);
  EXPECT_EQ(boundary_class(set, {1, 1}), BoundaryClass::south);
  EXPECT_EQ(boundary_class(set, {1, 2}), BoundaryClass::south);
  EXPECT_EQ(boundary_class(set, {0, 3}), BoundaryClass::null);
}

TEST(BoundaryPartition, MatchesDefinitionOnRandomSets) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto set = PlacementSet::from_rows(oracle::random_rows(rng, 10, 12));
    const auto part = boundary_partition(set);
    const auto brute = brute_boundary(set, 25);
    EXPECT_EQ(as_set(part.west), brute.west);
    EXPECT_EQ(as_set(part.south), brute.south);
    EXPECT_EQ(as_set(part.null_pts), brute.null_pts);
    EXPECT_EQ(part.size(), brute.all.size());
  }
}

TEST(PlacementSet, NestedComplementsForIncreasingThreshold) {
  for (double eta : {2.0, 3.0}) {
    const CostModel cost(CostParams{0.1, 0.01, eta});
    for (double q : {0.0, 0.3, 0.5, 0.8, 1.0}) {
      double prev_t = 0.004;
      auto prev = build_set(prev_t, q, cost);
      for (double t = 0.01; t < 3.0; t *= 1.37) {
        const auto next = build_set(t, q, cost);
        EXPECT_TRUE(prev.complement_within(next)) << q << " " << t;
        if (!(prev == next)) {
          EXPECT_FALSE(next.complement_within(prev));
        }
        prev = next;
        prev_t = t;
      }
    }
  }
}

TEST(PlacementSet, NamesAndEquality) {
  EXPECT_EQ(to_string(SetDomain::east_axis), "east");
  EXPECT_EQ(to_string(SetFamily::distance), "distance");
  const auto a = PlacementSet::from_rows({2, 1}, 0.1, SetFamily::threshold);
  const auto b = PlacementSet::from_rows({2, 1}, 0.7, SetFamily::custom);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == PlacementSet::on_axis(SetDomain::east_axis, 2));
}

}  // namespace
}  // namespace relay
