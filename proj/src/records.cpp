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

#include "relay/records.hpp"

#include <cmath>

namespace relay {

json number(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

double number_field(const json& j, const std::string& field,
                    std::optional<double> fallback) {
  if (!j.is_object()) throw ValidationError("body", "expected an object");
  const auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    if (fallback) return *fallback;
    throw ValidationError(field, "is required");
  }
  if (!it->is_number()) throw ValidationError(field, "must be a number");
  return it->get<double>();
}

void RunConfig::validate() const {
  (void)PathParams(p, q);
  path().require_solvable();
  (void)RelayPrice(lambda);
  (void)CostParams(p_m, gamma, eta);
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"p", c.p},     {"q", c.q},     {"lambda", c.lambda},
           {"eta", c.eta}, {"p_m", c.p_m}, {"gamma", c.gamma}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.p = number_field(j, "p");
  c.q = number_field(j, "q");
  c.lambda = number_field(j, "lambda");
  c.eta = number_field(j, "eta", 2.0);
  c.p_m = number_field(j, "p_m", 0.1);
  c.gamma = number_field(j, "gamma", 0.01);
  c.validate();
  return c;
}

void to_json(json& j, const LatticePoint& pt) { j = json{{"m", pt.m}, {"n", pt.n}}; }

void from_json(const json& j, LatticePoint& pt) {
  if (!j.is_object() || !j.contains("m") || !j.contains("n") ||
      !j["m"].is_number_integer() || !j["n"].is_number_integer()) {
    throw ValidationError("point", "expected {m, n} integers");
  }
  pt.m = j["m"].get<std::int64_t>();
  pt.n = j["n"].get<std::int64_t>();
}

void to_json(json& j, const PlacementSet& s) {
  j = json{{"domain", to_string(s.domain())},
           {"family", to_string(s.family())},
           {"threshold", s.threshold()},
           {"origin_guard", s.origin_guard()},
           {"rows", std::vector<std::int64_t>(s.rows().begin(), s.rows().end())},
           {"complement_size", s.complement_size()}};
}

namespace {

SetFamily family_from(const std::string& name) {
  if (name == "threshold") return SetFamily::threshold;
  if (name == "distance") return SetFamily::distance;
  return SetFamily::custom;
}

}  // namespace

PlacementSet placement_set_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("set", "expected an object");
  for (const char* key : {"optimal_set", "set"}) {
    if (j.contains(key) && j[key].is_object()) return placement_set_from_json(j[key]);
  }
  if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].empty()) {
    throw ValidationError("rows", "expected a non-empty integer array");
  }
  std::vector<std::int64_t> rows;
  for (const auto& v : j["rows"]) {
    if (!v.is_number_integer()) throw ValidationError("rows", "entries must be integers");
    rows.push_back(v.get<std::int64_t>());
  }
  const std::string domain = j.value("domain", "plane");
  const SetFamily family = family_from(j.value("family", "custom"));
  const double threshold = j.value("threshold", 0.0);
  PlacementSet set;
  if (domain == "plane") {
    set = PlacementSet::from_rows(std::move(rows), threshold, family);
  } else if (domain == "east" || domain == "north") {
    if (rows.size() != 1) throw ValidationError("rows", "axis sets hold one threshold");
    set = PlacementSet::on_axis(
        domain == "east" ? SetDomain::east_axis : SetDomain::north_axis, rows[0],
        threshold, family);
  } else {
    throw ValidationError("domain", "expected plane, east or north");
  }
  set.set_origin_guard(j.value("origin_guard", false));
  return set;
}

void to_json(json& j, const SetEvaluation& e) {
  j = json{{"g", number(e.g)},
           {"expected_relays", number(e.expected_relays)},
           {"expected_cost", number(e.expected_cost)},
           {"continue_mass", e.continue_mass},
           {"end_mass", e.end_mass},
           {"identity_residual", e.identity_residual},
           {"lambda", e.lambda}};
}

void to_json(json& j, const SolveResult& r) {
  j = json{{"g_star", r.g_star},
           {"lambda", r.lambda},
           {"iterations", r.iterations},
           {"trace", r.trace},
           {"optimal_set", r.optimal_set},
           {"evaluation", r.final_evaluation()}};
}

void to_json(json& j, const ConstrainedSolution& s) {
  j = json{{"kind", to_string(s.kind)},
           {"rho_avg", s.rho_avg},
           {"rho_max", s.rho_max},
           {"lambda", s.lambda},
           {"alpha", s.alpha},
           {"achieved_relays", s.achieved_relays},
           {"achieved_cost", s.achieved_cost},
           {"feasible", s.feasible},
           {"set_under", s.set_under},
           {"set_over", s.set_over},
           {"eval_under", s.eval_under},
           {"eval_over", s.eval_over}};
}

void to_json(json& j, const CurvePoint& c) {
  j = json{{"lambda", c.lambda},
           {"expected_relays", c.expected_relays},
           {"expected_cost", c.expected_cost},
           {"total_cost", c.total_cost}};
}

void to_json(json& j, const PathEvent& e) {
  j = json{{"direction", to_string(e.direction)}, {"ended", e.ended}};
}

PathEvent path_event_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("event", "expected an object");
  PathEvent e;
  const auto dir = j.find("direction");
  if (dir == j.end() || !dir->is_string()) {
    throw ValidationError("direction", "expected \"E\" or \"N\"");
  }
  const auto d = dir->get<std::string>();
  if (d == "E" || d == "east" || d == "East") {
    e.direction = Direction::east;
  } else if (d == "N" || d == "north" || d == "North") {
    e.direction = Direction::north;
  } else {
    throw ValidationError("direction", "expected \"E\" or \"N\"");
  }
  const auto ended = j.find("ended");
  if (ended != j.end() && !ended->is_null()) {
    if (!ended->is_boolean()) throw ValidationError("ended", "must be a boolean");
    e.ended = ended->get<bool>();
  }
  return e;
}

void to_json(json& j, const EpisodeResult& r) {
  j = json{{"total_cost", r.total_cost},
           {"relays", r.relays},
           {"steps", r.steps},
           {"relay_positions", r.relay_positions},
           {"end_position", r.end_position}};
}

void to_json(json& j, const McEstimate& m) {
  j = json{{"mean_cost", m.mean_cost},
           {"se_cost", m.se_cost},
           {"mean_relays", m.mean_relays},
           {"se_relays", m.se_relays},
           {"mean_objective", m.mean_objective},
           {"se_objective", m.se_objective},
           {"mean_steps", m.mean_steps},
           {"lambda", m.lambda},
           {"episodes", m.episodes},
           {"seed", m.seed}};
}

}  // namespace relay
