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

#ifndef RELAY_RECORDS_HPP
#define RELAY_RECORDS_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "relay/constrained_solver.hpp"
#include "relay/core_model.hpp"
#include "relay/osla_solver.hpp"
#include "relay/placement_set.hpp"
#include "relay/renewal_eval.hpp"
#include "relay/simulator.hpp"

namespace relay {

using json = nlohmann::json;

/// Model parameters shared by every command and session.
struct RunConfig {
  double p = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  double eta = 2.0;
  double p_m = 0.1;
  double gamma = 0.01;

  PathParams path() const { return PathParams(p, q); }
  CostParams cost() const { return CostParams(p_m, gamma, eta); }
  /// Throws ValidationError naming the first bad field.
  void validate() const;
};

void to_json(json& j, const RunConfig& c);
/// p, q and lambda are required; the rest default. Throws ValidationError.
RunConfig run_config_from_json(const json& j);

void to_json(json& j, const LatticePoint& pt);
void from_json(const json& j, LatticePoint& pt);

void to_json(json& j, const PlacementSet& s);
/// Accepts a set record, or any record holding one under "optimal_set" or
/// "set". Throws ValidationError or StructureError.
PlacementSet placement_set_from_json(const json& j);

void to_json(json& j, const SetEvaluation& e);
void to_json(json& j, const SolveResult& r);
void to_json(json& j, const ConstrainedSolution& s);
void to_json(json& j, const CurvePoint& c);
void to_json(json& j, const PathEvent& e);
PathEvent path_event_from_json(const json& j);
void to_json(json& j, const EpisodeResult& r);
void to_json(json& j, const McEstimate& m);

/// Numbers in records: non-finite values become null.
json number(double x);

/// Reads a required (or defaulted) number field; ValidationError on misuse.
double number_field(const json& j, const std::string& field,
                    std::optional<double> fallback = std::nullopt);

}  // namespace relay

#endif  // RELAY_RECORDS_HPP
