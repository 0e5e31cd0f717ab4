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

#include "relay/advisor_service.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "relay/heuristic_policy.hpp"
#include "relay/log.hpp"

namespace relay {

json ServiceError::record() const {
  json j{{"code", code_}, {"message", what()}};
  if (field_) j["field"] = *field_;
  return j;
}

void to_json(json& j, const HistoryEntry& h) {
  j = json{{"event", h.event},
           {"advice", h.advice},
           {"action", h.action},
           {"overridden", h.overridden},
           {"at", h.at},
           {"rel_state", h.rel_state},
           {"abs_position", h.abs_position},
           {"step_cost", h.step_cost},
           {"accumulated_cost", h.accumulated_cost},
           {"relays", h.relays}};
}

namespace {

json boundary_points(const PlacementSet& set) {
  const auto parts = boundary_partition(set);
  json out = json::array();
  auto add = [&](const std::vector<LatticePoint>& pts, const char* cls) {
    for (const auto& pt : pts) out.push_back({{"m", pt.m}, {"n", pt.n}, {"class", cls}});
  };
  add(parts.west, "west");
  add(parts.south, "south");
  add(parts.null_pts, "null");
  return out;
}

}  // namespace

void to_json(json& j, const Session& s) {
  j = json{{"id", s.id},
           {"params", s.params},
           {"policy", *s.policy},
           {"policy_info", s.policy_info},
           {"boundary", boundary_points(*s.policy)},
           {"rel_state", s.rel_state},
           {"abs_position", s.abs_position},
           {"relay_positions", s.relay_positions},
           {"history", s.history},
           {"accumulated_cost", s.accumulated_cost},
           {"relays", s.relays},
           {"objective", s.objective()},
           {"ended", s.ended}};
}

struct AdvisorService::Entry {
  std::mutex mutex;
  Session session;
};

AdvisorService::AdvisorService(AdvisorOptions options) : options_(std::move(options)) {}

AdvisorService::~AdvisorService() = default;

namespace {

// Runs fn, turning library errors into client-facing ones.
template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ServiceError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ServiceError(400, "validation_error", e.what(), e.field());
  } catch (const StructureError& e) {
    throw ServiceError(400, "invalid_policy", e.what());
  } catch (const DivergenceError& e) {
    throw ServiceError(422, "divergent_policy", e.what());
  } catch (const json::exception& e) {
    throw ServiceError(400, "bad_request", e.what());
  } catch (const Error& e) {
    throw ServiceError(500, "solver_error", e.what());
  }
}

std::string policy_kind(const json& request) {
  const auto it = request.find("policy");
  if (it == request.end() || it->is_null()) return "optimal";
  if (!it->is_string()) throw ValidationError("policy", "must be a string");
  return it->get<std::string>();
}

std::string new_token() {
  static std::mutex mutex;
  static std::mt19937_64 engine{std::random_device{}()};
  std::lock_guard<std::mutex> lock(mutex);
  std::ostringstream out;
  out << std::hex << engine();
  return out.str();
}

}  // namespace

ResolvedPolicy AdvisorService::resolve(const RunConfig& config, const json& request,
                                       std::uint64_t draw_key) const {
  const std::string kind = policy_kind(request);
  const PathParams pp = config.path();
  const CostModel cost(config.cost());
  json key = config;
  key["policy"] = kind;

  if (kind == "custom") {
    json set_record = request.contains("rows") ? request : json::object();
    if (!request.contains("rows")) throw ValidationError("rows", "is required for custom");
    auto set = placement_set_from_json(set_record);
    return ResolvedPolicy{std::make_shared<const PlacementSet>(std::move(set)),
                          json{{"kind", "custom"}}};
  }
  if (kind == "heuristic") {
    key["r_th"] = number_field(request, "r_th");
  } else if (kind == "constrained") {
    key["rho"] = number_field(request, "rho");
  } else if (kind != "optimal") {
    throw ValidationError("policy", "expected optimal, heuristic, custom or constrained");
  }

  const std::string cache_key = key.dump();
  ResolvedPolicy base;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (auto it = cache_.find(cache_key); it != cache_.end()) base = it->second;
  }
  if (!base.set) {
    if (kind == "optimal") {
      const auto r = solve_unconstrained(pp, cost, config.lambda);
      base.set = std::make_shared<const PlacementSet>(r.optimal_set);
      base.info = {{"kind", "optimal"}, {"g_star", r.g_star}, {"iterations", r.iterations}};
    } else if (kind == "heuristic") {
      const double r_th = key["r_th"].get<double>();
      auto set = distance_set(r_th, domain_for(pp));
      const auto ev = eval_cost(set, pp, cost, config.lambda);
      base.set = std::make_shared<const PlacementSet>(std::move(set));
      base.info = {{"kind", "heuristic"}, {"r_th", r_th}, {"g", ev.g}};
    } else {
      const double rho = key["rho"].get<double>();
      const auto s = solve_constrained(pp, cost, rho);
      // Both candidates travel in `info`; the draw happens per session.
      base.set = std::make_shared<const PlacementSet>(s.set_under);
      base.info = {{"kind", "constrained"}, {"solution", s}};
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(cache_key, base);
  }
  if (kind != "constrained") return base;

  const auto& sol = base.info["solution"];
  const double alpha = sol["alpha"].get<double>();
  const double seed = number_field(request, "seed", 0.0);
  EpisodeRng rng(static_cast<std::uint64_t>(seed), draw_key);
  const bool over = sol["kind"] == "mixed" && rng.bernoulli(alpha);
  ResolvedPolicy out;
  out.set = std::make_shared<const PlacementSet>(
      placement_set_from_json(sol[over ? "set_over" : "set_under"]));
  out.info = {{"kind", "constrained"},
              {"solution_kind", sol["kind"]},
              {"lambda", sol["lambda"]},
              {"alpha", alpha},
              {"drawn", over ? "over" : "under"},
              {"feasible", sol["feasible"]}};
  return out;
}

json AdvisorService::create_session(const json& request) {
  return guarded([&] { return create_from(request, "", std::nullopt); });
}

json AdvisorService::create_from(const json& request, const std::string& id,
                                 std::optional<PlacementSet> logged_set) {
  const RunConfig config = run_config_from_json(request);
  auto entry = std::make_shared<Entry>();
  Session& s = entry->session;
  s.params = config;
  std::uint64_t draw_key;
  {
    std::unique_lock<std::shared_mutex> lock(sessions_mutex_);
    draw_key = created_++;
  }
  if (logged_set) {
    s.policy = std::make_shared<const PlacementSet>(std::move(*logged_set));
    s.policy_info = request.value("policy_info", json{{"kind", policy_kind(request)}});
  } else {
    auto resolved = resolve(config, request, draw_key);
    s.policy = std::move(resolved.set);
    s.policy_info = std::move(resolved.info);
  }
  s.id = id.empty() ? new_token() : id;
  json out = s;
  {
    std::unique_lock<std::shared_mutex> lock(sessions_mutex_);
    if (!sessions_.emplace(s.id, entry).second) {
      throw ServiceError(409, "conflict", "session id already exists");
    }
  }
  if (!logged_set) {
    json logged = request;
    logged["policy_info"] = s.policy_info;
    append_log({{"op", "create"}, {"id", s.id}, {"request", logged}, {"set", *s.policy}});
  }
  return out;
}

std::shared_ptr<AdvisorService::Entry> AdvisorService::find(const std::string& id) const {
  std::shared_lock<std::shared_mutex> lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ServiceError(404, "not_found", "no session with id " + id, "id");
  }
  return it->second;
}

json AdvisorService::apply_step(const std::string& id, const json& request) {
  auto entry = find(id);
  return guarded([&] {
    const PathEvent ev = path_event_from_json(request);
    std::optional<std::string> override_action;
    if (const auto it = request.find("override"); it != request.end() && !it->is_null()) {
      if (!it->is_string() || (*it != "place" && *it != "skip")) {
        throw ValidationError("override", "expected \"place\" or \"skip\"");
      }
      override_action = it->get<std::string>();
    }
    std::lock_guard<std::mutex> lock(entry->mutex);
    Session& s = entry->session;
    if (s.ended) throw ServiceError(409, "conflict", "session has ended");
    const CostModel cost(s.params.cost());

    HistoryEntry h;
    h.event = ev;
    if (ev.direction == Direction::east) {
      ++s.rel_state.m;
      ++s.abs_position.m;
    } else {
      ++s.rel_state.n;
      ++s.abs_position.n;
    }
    h.at = s.rel_state;
    if (ev.ended) {
      h.advice = "source-placed";
      h.action = "source";
      h.step_cost = cost.at(s.rel_state);
      s.accumulated_cost += h.step_cost;
      s.ended = true;
    } else {
      const bool advise_place = s.policy->contains(s.rel_state);
      h.advice = advise_place ? "place" : "continue";
      const bool place = override_action ? *override_action == "place" : advise_place;
      h.overridden = override_action.has_value() && place != advise_place;
      h.action = place ? "placed" : "continued";
      if (place) {
        h.step_cost = cost.at(s.rel_state);
        s.accumulated_cost += h.step_cost;
        ++s.relays;
        s.relay_positions.push_back(s.abs_position);
        s.rel_state = {0, 0};
      }
    }
    h.rel_state = s.rel_state;
    h.abs_position = s.abs_position;
    h.accumulated_cost = s.accumulated_cost;
    h.relays = s.relays;
    s.history.push_back(h);

    json out = h;
    out["id"] = s.id;
    out["step_index"] = s.history.size() - 1;
    out["objective"] = s.objective();
    out["ended"] = s.ended;
    append_log({{"op", "step"}, {"id", s.id}, {"request", request}});
    return out;
  });
}

json AdvisorService::get_session(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard<std::mutex> lock(entry->mutex);
  return entry->session;
}

json AdvisorService::get_boundary(const json& request) const {
  return guarded([&] {
    const RunConfig config = run_config_from_json(request);
    const auto resolved = resolve(config, request, 0);
    return json{{"params", config},
                {"policy", *resolved.set},
                {"policy_info", resolved.info},
                {"boundary", boundary_points(*resolved.set)}};
  });
}

std::size_t AdvisorService::session_count() const {
  std::shared_lock<std::shared_mutex> lock(sessions_mutex_);
  return sessions_.size();
}

void AdvisorService::append_log(const json& line) {
  if (options_.log_path.empty()) return;
  std::lock_guard<std::mutex> lock(log_mutex_);
  std::ofstream out(options_.log_path, std::ios::app);
  out << line.dump() << '\n';
  if (!out) log::warn("could not append to session log " + options_.log_path);
}

void AdvisorService::replay_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("log_path", "cannot open " + path);
  // Replayed operations must not be logged again.
  const std::string saved = std::exchange(options_.log_path, "");
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string op = j.at("op");
      if (op == "create") {
        guarded([&] {
          return create_from(j.at("request"), j.at("id"), placement_set_from_json(j.at("set")));
        });
      } else if (op == "step") {
        apply_step(j.at("id"), j.at("request"));
      }
    }
  } catch (...) {
    options_.log_path = saved;
    throw;
  }
  options_.log_path = saved;
}

// HTTP ----------------------------------------------------------------------

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void handle(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    send_json(res, e.status(), e.record());
  } catch (const json::exception& e) {
    send_json(res, 400, json{{"code", "bad_request"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, json{{"code", "internal"}, {"message", e.what()}});
  }
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ServiceError(400, "bad_request", std::string("malformed JSON: ") + e.what());
  }
}

// Query string to a request record: numbers where a number is expected.
json query_record(const httplib::Request& req) {
  json j = json::object();
  for (const auto& [key, value] : req.params) {
    if (key == "policy" || key == "domain") {
      j[key] = value;
    } else if (key == "rows") {
      json rows = json::array();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          rows.push_back(std::stoll(item));
        } catch (const std::exception&) {
          throw ServiceError(400, "validation_error", "rows: expected integers", "rows");
        }
      }
      j[key] = rows;
    } else {
      try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        j[key] = x;
      } catch (const std::exception&) {
        throw ServiceError(400, "validation_error", key + ": must be a number", key);
      }
    }
  }
  return j;
}

}  // namespace

AdvisorServer::AdvisorServer(AdvisorService& service, std::string static_dir)
    : server_(std::make_unique<httplib::Server>()) {
  auto& svr = *server_;
  svr.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { send_json(res, 201, service.create_session(parse_body(req))); });
  });
  svr.Post(R"(/sessions/([^/]+)/steps)",
           [&service](const httplib::Request& req, httplib::Response& res) {
             handle(res, [&] {
               send_json(res, 200, service.apply_step(req.matches[1], parse_body(req)));
             });
           });
  svr.Get(R"(/sessions/([^/]+))",
          [&service](const httplib::Request& req, httplib::Response& res) {
            handle(res, [&] { send_json(res, 200, service.get_session(req.matches[1])); });
          });
  svr.Get("/boundary", [&service](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { send_json(res, 200, service.get_boundary(query_record(req))); });
  });
  if (!static_dir.empty() && !svr.set_mount_point("/", static_dir)) {
    log::warn("static directory " + static_dir + " not found; UI not served");
  }
}

AdvisorServer::~AdvisorServer() { stop(); }

int AdvisorServer::bind_any(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool AdvisorServer::bind(const std::string& host, int port) {
  return server_->bind_to_port(host, port);
}

bool AdvisorServer::listen() { return server_->listen_after_bind(); }

void AdvisorServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void AdvisorServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace relay
