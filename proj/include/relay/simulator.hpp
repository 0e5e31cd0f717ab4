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

#ifndef RELAY_SIMULATOR_HPP
#define RELAY_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relay/core_model.hpp"
#include "relay/placement_set.hpp"

namespace relay {

enum class Direction { east, north };

std::string to_string(Direction d);

struct PathEvent {
  Direction direction = Direction::east;
  bool ended = false;  ///< the path terminates at the new point

  friend bool operator==(const PathEvent&, const PathEvent&) = default;
};

/// Random stream for one episode. Streams are keyed by (seed, episode), so a
/// run gives the same numbers however episodes are spread across threads.
class EpisodeRng {
 public:
  EpisodeRng(std::uint64_t seed, std::uint64_t episode);

  /// Uniform on [0, 1) from the top 53 bits of one draw.
  double uniform();
  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  std::mt19937_64 engine_;
};

/// Events until the first with ended == true.
std::vector<PathEvent> sample_path(const PathParams& pp, EpisodeRng& rng);

/// A deterministic set, or a start-of-walk lottery between two sets: `over`
/// with probability alpha, `under` otherwise.
class Policy {
 public:
  explicit Policy(PlacementSet set);
  Policy(PlacementSet under, PlacementSet over, double alpha);

  bool is_mixed() const { return mixed_; }
  double alpha() const { return alpha_; }
  const PlacementSet& under() const { return under_; }
  const PlacementSet& over() const { return over_; }

  /// The set used for one walk. Draws from rng only for mixed policies.
  const PlacementSet& draw(EpisodeRng& rng) const;

 private:
  PlacementSet under_;
  PlacementSet over_;
  double alpha_ = 0.0;
  bool mixed_ = false;
};

struct EpisodeResult {
  double total_cost = 0.0;  ///< sum of hop costs including the source hop
  std::int64_t relays = 0;
  std::int64_t steps = 0;  ///< path length L
  std::vector<LatticePoint> relay_positions;  ///< absolute
  /// Hop vectors, relay to relay, the last one ending at the source.
  std::vector<LatticePoint> hops;
  LatticePoint end_position;  ///< absolute
  bool drew_over = false;     ///< mixed policies: which set was used
};

/// Walks a given event sequence under a fixed set. Throws ValidationError if
/// the events are empty or an ended event is not last.
EpisodeResult walk_path(const PlacementSet& set, const std::vector<PathEvent>& events,
                        const CostModel& cost);

EpisodeResult run_episode(const Policy& policy, const PathParams& pp,
                          const CostModel& cost, EpisodeRng& rng);

struct McEstimate {
  double mean_cost = 0.0;
  double se_cost = 0.0;
  double mean_relays = 0.0;
  double se_relays = 0.0;
  double mean_objective = 0.0;  ///< mean of C + lambda * N
  double se_objective = 0.0;
  double mean_steps = 0.0;
  double lambda = 0.0;
  std::int64_t episodes = 0;
  std::uint64_t seed = 0;
};

/// Runs episodes 0..episodes-1 with streams EpisodeRng(seed, i). The result
/// does not depend on the thread count.
McEstimate monte_carlo(const Policy& policy, const PathParams& pp,
                       const CostModel& cost, double lambda, std::int64_t episodes,
                       std::uint64_t seed, unsigned threads = 0);

}  // namespace relay

#endif  // RELAY_SIMULATOR_HPP
