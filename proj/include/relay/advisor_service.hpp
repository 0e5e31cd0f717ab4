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

#ifndef RELAY_ADVISOR_SERVICE_HPP
#define RELAY_ADVISOR_SERVICE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "relay/records.hpp"

namespace httplib {
class Server;
}

namespace relay {

/// An error meant for a client: HTTP status plus the {code, field?, message}
/// record.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message,
               std::optional<std::string> field = std::nullopt)
      : Error(message), status_(status), code_(std::move(code)), field_(std::move(field)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const std::optional<std::string>& field() const { return field_; }
  json record() const;

 private:
  int status_;
  std::string code_;
  std::optional<std::string> field_;
};

/// A policy resolved from a request. `info` describes how it was obtained.
struct ResolvedPolicy {
  std::shared_ptr<const PlacementSet> set;
  json info;
};

struct HistoryEntry {
  PathEvent event;
  std::string advice;  ///< continue | place | source-placed
  std::string action;  ///< continued | placed | source
  bool overridden = false;
  LatticePoint at;         ///< relative point where the decision was taken
  LatticePoint rel_state;  ///< after the action
  LatticePoint abs_position;
  double step_cost = 0.0;
  double accumulated_cost = 0.0;
  std::int64_t relays = 0;
};

struct Session {
  std::string id;
  RunConfig params;
  std::shared_ptr<const PlacementSet> policy;
  json policy_info;
  LatticePoint rel_state;
  LatticePoint abs_position;
  std::vector<LatticePoint> relay_positions;
  std::vector<HistoryEntry> history;
  double accumulated_cost = 0.0;
  std::int64_t relays = 0;
  bool ended = false;

  double objective() const { return accumulated_cost + params.lambda * relays; }
};

void to_json(json& j, const HistoryEntry& h);
void to_json(json& j, const Session& s);

struct AdvisorOptions {
  /// When set, every create and step is appended here as one JSON line.
  std::string log_path;
};

/**
 * Live deployment sessions. Thread-safe: sessions are independent, steps on
 * one session are serialized, and solved policies are cached and shared.
 *
 * Requests carry RunConfig fields plus a policy choice:
 *   "optimal" (default), "heuristic" with r_th, "custom" with rows (and
 *   optionally domain), or "constrained" with rho (and optionally seed); the
 *   constrained lottery is drawn once when the session is created.
 */
class AdvisorService {
 public:
  explicit AdvisorService(AdvisorOptions options = {});
  ~AdvisorService();

  json create_session(const json& request);
  json apply_step(const std::string& id, const json& request);
  json get_session(const std::string& id) const;
  json get_boundary(const json& request) const;

  std::size_t session_count() const;

  /// Rebuilds sessions from a log written by another instance.
  void replay_log(const std::string& path);

 private:
  struct Entry;

  ResolvedPolicy resolve(const RunConfig& config, const json& request,
                         std::uint64_t draw_key) const;
  std::shared_ptr<Entry> find(const std::string& id) const;
  json create_from(const json& request, const std::string& id,
                   std::optional<PlacementSet> logged_set);
  void append_log(const json& line);

  AdvisorOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, ResolvedPolicy> cache_;
  std::mutex log_mutex_;
  std::uint64_t created_ = 0;
};

/// HTTP front end: POST /sessions, POST /sessions/{id}/steps,
/// GET /sessions/{id}, GET /boundary, and static files from static_dir.
class AdvisorServer {
 public:
  explicit AdvisorServer(AdvisorService& service, std::string static_dir = "");
  ~AdvisorServer();

  /// Binds to an ephemeral port and returns it (or -1).
  int bind_any(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace relay

#endif  // RELAY_ADVISOR_SERVICE_HPP
