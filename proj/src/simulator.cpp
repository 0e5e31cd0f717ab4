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

#include "relay/simulator.hpp"

#include <cmath>
#include <utility>

#include "relay/parallel.hpp"

namespace relay {

std::string to_string(Direction d) {
  return d == Direction::east ? "E" : "N";
}

EpisodeRng::EpisodeRng(std::uint64_t seed, std::uint64_t episode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(episode),
                    static_cast<std::uint32_t>(episode >> 32)};
  engine_.seed(seq);
}

double EpisodeRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<PathEvent> sample_path(const PathParams& pp, EpisodeRng& rng) {
  std::vector<PathEvent> events;
  for (;;) {
    PathEvent ev;
    ev.direction = rng.bernoulli(pp.q) ? Direction::east : Direction::north;
    ev.ended = rng.bernoulli(pp.p);
    events.push_back(ev);
    if (ev.ended) return events;
  }
}

Policy::Policy(PlacementSet set) : under_(set), over_(std::move(set)) {}

Policy::Policy(PlacementSet under, PlacementSet over, double alpha)
    : under_(std::move(under)), over_(std::move(over)), alpha_(alpha), mixed_(true) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha", "mixing weight must lie in [0, 1]");
  }
}

const PlacementSet& Policy::draw(EpisodeRng& rng) const {
  if (!mixed_) return under_;
  return rng.bernoulli(alpha_) ? over_ : under_;
}

EpisodeResult walk_path(const PlacementSet& set, const std::vector<PathEvent>& events,
                        const CostModel& cost) {
  if (events.empty()) throw ValidationError("events", "path has no steps");
  EpisodeResult out;
  LatticePoint rel{0, 0};
  LatticePoint abs{0, 0};
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (ev.ended != (i + 1 == events.size())) {
      throw ValidationError("events", "exactly the last event must end the path");
    }
    if (ev.direction == Direction::east) {
      ++rel.m;
      ++abs.m;
    } else {
      ++rel.n;
      ++abs.n;
    }
    ++out.steps;
    if (ev.ended) {
      out.total_cost += cost.at(rel);
      out.hops.push_back(rel);
      break;
    }
    if (set.contains(rel)) {
      out.total_cost += cost.at(rel);
      out.hops.push_back(rel);
      out.relay_positions.push_back(abs);
      ++out.relays;
      rel = {0, 0};
    }
  }
  out.end_position = abs;
  return out;
}

EpisodeResult run_episode(const Policy& policy, const PathParams& pp,
                          const CostModel& cost, EpisodeRng& rng) {
  const PlacementSet& set = policy.draw(rng);
  auto out = walk_path(set, sample_path(pp, rng), cost);
  out.drew_over = policy.is_mixed() && &set == &policy.over();
  return out;
}

namespace {

// Running mean and sum of squared deviations; merged pairwise in a fixed order.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / total;
    m2 += o.m2 + delta * delta * n * o.n / total;
    n = total;
  }

  double std_error() const {
    return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  }
};

struct Chunk {
  Moments cost, relays, objective, steps;
};

constexpr std::int64_t kChunk = 4096;

}  // namespace

McEstimate monte_carlo(const Policy& policy, const PathParams& pp,
                       const CostModel& cost, double lambda, std::int64_t episodes,
                       std::uint64_t seed, unsigned threads) {
  if (episodes < 1) throw ValidationError("episodes", "must be at least 1");
  if (!(lambda >= 0.0)) throw ValidationError("lambda", "must be nonnegative");
  const auto chunks = static_cast<std::size_t>((episodes + kChunk - 1) / kChunk);
  std::vector<Chunk> parts(chunks);
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
        const std::int64_t end = std::min(episodes, begin + kChunk);
        auto& part = parts[c];
        for (std::int64_t i = begin; i < end; ++i) {
          EpisodeRng rng(seed, static_cast<std::uint64_t>(i));
          const auto ep = run_episode(policy, pp, cost, rng);
          const double n = static_cast<double>(ep.relays);
          part.cost.add(ep.total_cost);
          part.relays.add(n);
          part.objective.add(ep.total_cost + lambda * n);
          part.steps.add(static_cast<double>(ep.steps));
        }
      },
      threads);
  Chunk all;
  for (const auto& part : parts) {
    all.cost.merge(part.cost);
    all.relays.merge(part.relays);
    all.objective.merge(part.objective);
    all.steps.merge(part.steps);
  }
  McEstimate out;
  out.mean_cost = all.cost.mean;
  out.se_cost = all.cost.std_error();
  out.mean_relays = all.relays.mean;
  out.se_relays = all.relays.std_error();
  out.mean_objective = all.objective.mean;
  out.se_objective = all.objective.std_error();
  out.mean_steps = all.steps.mean;
  out.lambda = lambda;
  out.episodes = episodes;
  out.seed = seed;
  return out;
}

}  // namespace relay
