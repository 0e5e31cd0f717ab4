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

#ifndef RELAY_CLI_HPP
#define RELAY_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace relay {

/// Exit statuses of run_cli.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,     ///< numerical failure, or `verify` found a violation
  kExitUsage = 2,       ///< bad flags or parameter values
  kExitInfeasible = 3,  ///< `constrained` budget below every reachable E N
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relay

#endif  // RELAY_CLI_HPP
