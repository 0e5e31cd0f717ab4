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

#ifndef RELAY_VERIFICATION_HPP
#define RELAY_VERIFICATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "relay/core_model.hpp"

namespace relay {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::int64_t episodes = 20000;  ///< 0 skips the Monte Carlo check
  std::uint64_t seed = 1;
  int random_sets = 10;
  unsigned threads = 0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Runs the structural and numerical invariants for one instance: cost
/// conditions, OSLA vs value iteration, fixed-point trace, grid scan,
/// renewal identity and normalization, finite-horizon monotonicity, q
/// symmetry, heuristic dominance and (optionally) Monte Carlo agreement.
VerifyReport run_verification(const PathParams& pp, const CostParams& cost,
                              double lambda, const VerifyOptions& options = {});

}  // namespace relay

#endif  // RELAY_VERIFICATION_HPP
