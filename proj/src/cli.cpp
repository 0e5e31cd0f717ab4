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

#include "relay/cli.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "relay/advisor_service.hpp"
#include "relay/constrained_solver.hpp"
#include "relay/heuristic_policy.hpp"
#include "relay/osla_solver.hpp"
#include "relay/parallel.hpp"
#include "relay/records.hpp"
#include "relay/simulator.hpp"
#include "relay/verification.hpp"

namespace relay {

namespace {

struct ModelFlags {
  double p = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  double eta = 2.0;
  double p_m = 0.1;
  double gamma = 0.01;
  std::string out = "-";
  unsigned threads = 0;
};

void add_model_flags(CLI::App* sub, ModelFlags& f, bool need_q, bool need_lambda) {
  sub->add_option("--p", f.p, "termination probability per step")->required();
  auto* q = sub->add_option("--q", f.q, "probability a step goes East");
  auto* lambda = sub->add_option("--lambda", f.lambda, "relay price");
  if (need_q) q->required();
  if (need_lambda) lambda->required();
  sub->add_option("--eta", f.eta, "path-loss exponent")->capture_default_str();
  sub->add_option("--pm", f.p_m, "minimum hop power P_m")->capture_default_str();
  sub->add_option("--gamma", f.gamma, "SNR coefficient")->capture_default_str();
  sub->add_option("--out", f.out, "output file, - for stdout")->capture_default_str();
  sub->add_option("--threads", f.threads, "worker threads, 0 for all cores");
}

RunConfig config_of(const ModelFlags& f) {
  RunConfig c{f.p, f.q, f.lambda, f.eta, f.p_m, f.gamma};
  (void)PathParams(c.p, c.q);
  (void)RelayPrice(c.lambda);
  (void)c.cost();
  return c;
}

// Writes to --out, or to the given stream for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw ValidationError("out", "cannot open " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit_record(const ModelFlags& f, std::ostream& out, const json& record) {
  Sink sink(f.out, out);
  *sink << record.dump() << '\n';
}

std::string csv_number(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

json boundary_rows(const PlacementSet& set) {
  json rows = json::array();
  for (std::int64_t n = 0; n <= set.n_max(); ++n) {
    const auto m = set.m_star(n);
    if (m == PlacementSet::kUnbounded) continue;
    rows.push_back({{"n", n}, {"m_star", m}});
  }
  return rows;
}

int cmd_solve(const ModelFlags& f, std::ostream& out) {
  const auto c = config_of(f);
  const auto r = solve_unconstrained(c.path(), CostModel(c.cost()), c.lambda);
  json record = r;
  record["command"] = "solve";
  record["params"] = c;
  record["boundary"] = boundary_rows(r.optimal_set);
  emit_record(f, out, record);
  return kExitOk;
}

int cmd_scan_g(const ModelFlags& f, double h_max, double h_step, std::ostream& out) {
  const auto c = config_of(f);
  const CostModel cost(c.cost());
  if (h_max <= 0.0) {
    h_max = 3.0 * solve_unconstrained(c.path(), cost, c.lambda).g_star + 1.0;
  }
  if (h_step <= 0.0) h_step = h_max / 300.0;
  const auto scan = grid_scan(c.path(), cost, c.lambda, h_max, h_step);
  Sink sink(f.out, out);
  *sink << "h,g_h\n";
  for (std::size_t i = 0; i < scan.h.size(); ++i) {
    *sink << csv_number(scan.h[i]) << ',' << csv_number(scan.g[i]) << '\n';
  }
  return kExitOk;
}

int cmd_sweep_lambda(const ModelFlags& f, double lambda_max, double lambda_step,
                     std::ostream& out) {
  const auto c = config_of(f);
  if (!(lambda_step > 0.0)) throw ValidationError("lambda-step", "must be positive");
  std::vector<double> grid;
  for (int i = 0; i * lambda_step <= lambda_max + 1e-12; ++i) grid.push_back(i * lambda_step);
  const auto curve = relay_curve(c.path(), CostModel(c.cost()), grid, f.threads);
  Sink sink(f.out, out);
  *sink << "lambda,en,ec,j\n";
  for (const auto& pt : curve) {
    *sink << csv_number(pt.lambda) << ',' << csv_number(pt.expected_relays) << ','
          << csv_number(pt.expected_cost) << ',' << csv_number(pt.total_cost) << '\n';
  }
  return kExitOk;
}

int cmd_sweep_q(const ModelFlags& f, double q_step, std::ostream& out) {
  auto c = config_of(f);
  if (!(q_step > 0.0 && q_step <= 1.0)) throw ValidationError("q-step", "must be in (0, 1]");
  std::vector<double> qs;
  const int count = static_cast<int>(std::floor(1.0 / q_step + 1e-9));
  for (int i = 0; i <= count; ++i) qs.push_back(std::min(1.0, i * q_step));
  std::vector<double> j(qs.size());
  const CostModel cost(c.cost());
  parallel_for(
      qs.size(),
      [&](std::size_t i) {
        j[i] = solve_unconstrained(PathParams(c.p, qs[i]), cost, c.lambda).g_star;
      },
      f.threads);
  Sink sink(f.out, out);
  *sink << "q,j\n";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    *sink << csv_number(qs[i]) << ',' << csv_number(j[i]) << '\n';
  }
  return kExitOk;
}

int cmd_boundaries(const ModelFlags& f, const std::vector<double>& etas, std::ostream& out) {
  const auto c = config_of(f);
  Sink sink(f.out, out);
  *sink << "eta,n,m_star\n";
  for (double eta : etas) {
    const CostModel cost(CostParams(c.p_m, c.gamma, eta));
    const auto r = solve_unconstrained(c.path(), cost, c.lambda);
    for (const auto& row : boundary_rows(r.optimal_set)) {
      *sink << csv_number(eta) << ',' << row["n"].get<std::int64_t>() << ','
            << row["m_star"].get<std::int64_t>() << '\n';
    }
  }
  return kExitOk;
}

int cmd_constrained(const ModelFlags& f, double rho, const ConstrainedOptions& opts,
                    std::ostream& out, std::ostream& err) {
  const auto c = config_of(f);
  const auto s = solve_constrained(c.path(), CostModel(c.cost()), rho, opts);
  json record = s;
  record["command"] = "constrained";
  record["params"] = c;
  emit_record(f, out, record);
  if (!s.feasible) {
    err << "infeasible: rho_avg " << rho << " is below the sparsest reachable E N "
        << s.achieved_relays << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_heuristic(const ModelFlags& f, std::vector<double> rhos, int points,
                  std::ostream& out) {
  const auto c = config_of(f);
  const CostModel cost(c.cost());
  if (rhos.empty()) {
    if (points < 1) throw ValidationError("points", "must be at least 1");
    const double rho_max =
        solve_unconstrained(c.path(), cost, 0.0).final_evaluation().expected_relays;
    for (int i = 1; i <= points; ++i) rhos.push_back(rho_max * i / points);
  }
  std::sort(rhos.begin(), rhos.end());
  const auto rows = compare(c.path(), cost, rhos, {}, f.threads);
  Sink sink(f.out, out);
  *sink << "rho,cost_opt,cost_heur\n";
  for (const auto& r : rows) {
    *sink << csv_number(r.rho) << ',' << csv_number(r.cost_optimal) << ','
          << csv_number(r.cost_heuristic) << '\n';
  }
  return kExitOk;
}

struct SimFlags {
  std::string policy = "optimal";
  double r_th = 0.0;
  double rho = 0.0;
  std::int64_t episodes = 10000;
  std::uint64_t seed = 1;
};

int cmd_simulate(const ModelFlags& f, const SimFlags& s, std::ostream& out) {
  const auto c = config_of(f);
  const PathParams pp = c.path();
  const CostModel cost(c.cost());
  json policy_info;
  std::optional<Policy> policy;
  if (s.policy.rfind("file:", 0) == 0) {
    const std::string path = s.policy.substr(5);
    std::ifstream in(path);
    if (!in) throw ValidationError("policy", "cannot open " + path);
    policy.emplace(placement_set_from_json(json::parse(in)));
    policy_info = {{"kind", "file"}, {"path", path}};
  } else if (s.policy == "optimal") {
    if (pp.p == 1.0) {
      // Every path is a single hop; any admissible set acts the same.
      policy.emplace(PlacementSet{});
      policy_info = {{"kind", "optimal"}, {"note", "p = 1: single-hop paths"}};
    } else {
      const auto r = solve_unconstrained(pp, cost, c.lambda);
      policy.emplace(r.optimal_set);
      policy_info = {{"kind", "optimal"}, {"g_star", r.g_star}};
    }
  } else if (s.policy == "heuristic") {
    policy.emplace(distance_set(s.r_th, domain_for(pp)));
    policy_info = {{"kind", "heuristic"}, {"r_th", s.r_th}};
  } else if (s.policy == "constrained") {
    const auto sol = solve_constrained(pp, cost, s.rho);
    if (sol.kind == ConstrainedKind::mixed) {
      policy.emplace(sol.set_under, sol.set_over, sol.alpha);
    } else {
      policy.emplace(sol.set_under);
    }
    policy_info = {{"kind", "constrained"}, {"solution", sol}};
  } else {
    throw ValidationError("policy", "expected optimal, heuristic, constrained or file:<path>");
  }
  const auto mc = monte_carlo(*policy, pp, cost, c.lambda, s.episodes, s.seed, f.threads);
  json record{{"command", "simulate"},
              {"params", c},
              {"policy", policy_info},
              {"set", policy->under()},
              {"estimate", mc}};
  if (policy->is_mixed()) record["set_over"] = policy->over();
  if (s.episodes == 1) {
    EpisodeRng rng(s.seed, 0);
    record["episode"] = run_episode(*policy, pp, cost, rng);
  }
  emit_record(f, out, record);
  return kExitOk;
}

int cmd_verify(const ModelFlags& f, const VerifyOptions& v, std::ostream& out) {
  const auto c = config_of(f);
  auto opts = v;
  opts.threads = f.threads;
  const auto report = run_verification(c.path(), c.cost(), c.lambda, opts);
  json checks = json::array();
  for (const auto& check : report.checks) {
    checks.push_back({{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
  }
  emit_record(f, out,
              json{{"command", "verify"},
                   {"params", c},
                   {"passed", report.all_passed()},
                   {"checks", checks}});
  return report.all_passed() ? kExitOk : kExitFailure;
}

AdvisorServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::string log_path;
  std::string replay;
};

int cmd_serve(const ServeFlags& s, std::ostream& err) {
  AdvisorService service(AdvisorOptions{s.log_path});
  if (!s.replay.empty()) service.replay_log(s.replay);
  AdvisorServer server(service, s.static_dir);
  const bool bound = s.port == 0 ? server.bind_any(s.host) > 0 : server.bind(s.host, s.port);
  if (!bound) {
    err << "error: cannot bind " << s.host << ':' << s.port << '\n';
    return kExitFailure;
  }
  err << "advisor listening on " << s.host << ':' << s.port << '\n';
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relay placement along random lattice paths", "relay_cli"};
  app.require_subcommand(1);
  ModelFlags f;

  auto* solve = app.add_subcommand("solve", "optimal placement set and g*");
  add_model_flags(solve, f, true, true);

  double h_max = 0.0, h_step = 0.0;
  auto* scan = app.add_subcommand("scan-g", "g(h) on a grid of h (CSV h,g_h)");
  add_model_flags(scan, f, true, true);
  scan->add_option("--h-max", h_max, "largest h (default 3 g* + 1)");
  scan->add_option("--h-step", h_step, "grid step (default h_max / 300)");

  double lambda_max = 100.0, lambda_step = 1.0;
  auto* sweep_l = app.add_subcommand("sweep-lambda", "E N, E C and J against lambda (CSV)");
  add_model_flags(sweep_l, f, true, false);
  sweep_l->add_option("--lambda-max", lambda_max)->capture_default_str();
  sweep_l->add_option("--lambda-step", lambda_step)->capture_default_str();

  double q_step = 0.05;
  auto* sweep_q = app.add_subcommand("sweep-q", "J against q (CSV q,j)");
  add_model_flags(sweep_q, f, false, true);
  sweep_q->add_option("--q-step", q_step)->capture_default_str();

  std::vector<double> etas{2.0, 3.0, 4.0};
  auto* bounds = app.add_subcommand("boundaries", "optimal boundary per eta (CSV eta,n,m_star)");
  add_model_flags(bounds, f, true, true);
  bounds->add_option("--etas", etas, "path-loss exponents")->delimiter(',');

  double rho = 0.0;
  auto* constrained = app.add_subcommand("constrained", "minimize E C subject to E N <= rho");
  add_model_flags(constrained, f, true, false);
  constrained->add_option("--rho", rho, "relay budget per path")->required();
  ConstrainedOptions constrained_opts;
  constrained->add_option("--max-complement", constrained_opts.max_complement,
                          "give up once a set leaves more points unplaced")
      ->capture_default_str();

  std::vector<double> rhos;
  int points = 10;
  auto* heur = app.add_subcommand("heuristic", "optimal vs distance heuristic (CSV)");
  add_model_flags(heur, f, true, false);
  heur->add_option("--rho", rhos, "budgets (default: evenly up to rho_max)")->delimiter(',');
  heur->add_option("--points", points, "budgets when --rho is absent")->capture_default_str();

  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a policy");
  add_model_flags(simulate, f, true, true);
  simulate->add_option("--policy", sim.policy, "optimal | heuristic | constrained | file:<path>")
      ->capture_default_str();
  simulate->add_option("--r-th", sim.r_th, "distance threshold for --policy heuristic");
  simulate->add_option("--rho", sim.rho, "budget for --policy constrained");
  simulate->add_option("--episodes", sim.episodes)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();

  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "run the invariant suite on one instance");
  add_model_flags(verify, f, true, true);
  verify->add_option("--episodes", verify_opts.episodes, "0 skips Monte Carlo")
      ->capture_default_str();
  verify->add_option("--seed", verify_opts.seed)->capture_default_str();

  ServeFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "start the advisor HTTP service");
  serve->add_option("--host", serve_flags.host)->capture_default_str();
  serve->add_option("--port", serve_flags.port, "0 picks a free port")->capture_default_str();
  serve->add_option("--static", serve_flags.static_dir, "directory with the UI files");
  serve->add_option("--log", serve_flags.log_path, "append session events here (JSON lines)");
  serve->add_option("--replay", serve_flags.replay, "restore sessions from a log first");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(f, out);
    if (*scan) return cmd_scan_g(f, h_max, h_step, out);
    if (*sweep_l) return cmd_sweep_lambda(f, lambda_max, lambda_step, out);
    if (*sweep_q) return cmd_sweep_q(f, q_step, out);
    if (*bounds) return cmd_boundaries(f, etas, out);
    if (*constrained) return cmd_constrained(f, rho, constrained_opts, out, err);
    if (*heur) return cmd_heuristic(f, rhos, points, out);
    if (*simulate) return cmd_simulate(f, sim, out);
    if (*verify) return cmd_verify(f, verify_opts, out);
    if (*serve) return cmd_serve(serve_flags, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace relay
