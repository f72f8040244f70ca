#pragma once

// One solve run from a level file to a run record; shared by the CLI and the
// bench harness.

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>

#include "gridsat/backend.hpp"
#include "gridsat/fixtures.hpp"
#include "gridsat/search.hpp"

namespace gridsat {

struct SolveRequest {
  std::string instance;
  Game game = Game::Snowman;
  std::string mode = "hybrid";          // full | collapsed | hybrid
  std::optional<ReachKind> reach;       // hybrid default: tree ascending, path descending
  double timeout = 0;                   // seconds per instance, 0 = unlimited
  std::uint64_t seed = 0;
  std::string solver_cmd;               // empty = embedded solver
  int horizon_cap = 64;
};

struct SolveReport {
  RunRecord record;
  std::vector<Direction> moves;
};

inline ReachKind reach_from(std::string_view s) {
  if (s == "path") return ReachKind::Path;
  if (s == "dag") return ReachKind::Dag;
  if (s == "tree") return ReachKind::Tree;
  throw ContractError("unknown reach encoding: " + std::string(s));
}

inline SolveReport run_solve(const Level& lv, const SolveRequest& req) {
  auto start = std::chrono::steady_clock::now();
  auto backend = make_backend(req.solver_cmd, req.seed);
  SolveReport rep;
  RunRecord& r = rep.record;
  r.instance = req.instance;
  r.game = to_string(lv.game);
  r.mode = req.mode;
  r.seed = req.seed;
  r.backend = backend->id();

  SearchOutcome out;
  if (req.mode == "full" || req.mode == "collapsed") {
    const ReachKind reach = req.reach.value_or(ReachKind::Path);
    r.reach = req.mode == "full" ? "none" : to_string(reach);
    BudgetPolicy policy{0, req.timeout, req.horizon_cap};
    out = solve_sequential(lv, req.mode == "full" ? Mode::Full : Mode::Collapsed, reach, *backend, policy);
  } else if (req.mode == "hybrid") {
    HybridOptions opts;
    if (req.reach) opts.ascend_reach = opts.descend_reach = *req.reach;
    r.reach = req.reach ? to_string(*req.reach)
                        : std::string(to_string(opts.ascend_reach)) + "+" + to_string(opts.descend_reach);
    opts.ascend = {0, req.timeout, req.horizon_cap};
    SearchOutcome up = ascend_parallel(lv, opts.ascend_reach, *backend, opts.ascend);
    out = up;
    if (up.bounds.upper && up.bounds.status != BoundStatus::Optimal) {
      double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      opts.descend = {0, 0, req.horizon_cap};
      if (req.timeout > 0) opts.descend.overall = std::max(req.timeout - spent, 1e-3);
      out = descend(lv, *up.bounds.upper, up.plan, opts.descend_reach, *backend, opts.descend);
      out.bounds.probes.insert(out.bounds.probes.begin(), up.bounds.probes.begin(), up.bounds.probes.end());
    }
  } else {
    throw ContractError("unknown mode: " + req.mode);
  }
  r.lb = out.bounds.lower;
  r.ub = out.bounds.upper;
  r.status = out.bounds.status;
  r.horizons = out.bounds.probes;
  if (out.plan) {
    rep.moves = out.moves;
    r.lurd = to_lurd(lv, rep.moves);
  }
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Value of an environment variable, if set and non-empty.
inline std::optional<std::string> env_value(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace gridsat
