#pragma once

// Solving strategies: iterative deepening over f(T) for T = 0, 1, 2, ...,
// parallel ascend for a first upper bound, sequential descend with noop
// padding, and the hybrid of the two.

#include <chrono>
#include <optional>
#include <vector>

#include "gridsat/backend.hpp"
#include "gridsat/encoder.hpp"
#include "gridsat/plan.hpp"

namespace gridsat {

struct BudgetPolicy {
  double per_call = 0;  // seconds, 0 = unlimited
  double overall = 0;   // seconds, 0 = unlimited
  int horizon_cap = 64;
};

struct Bounds {
  std::optional<int> lower;
  std::optional<int> upper;
  BoundStatus status = BoundStatus::Unknown;
  std::vector<HorizonProbe> probes;
};

struct SearchOutcome {
  Bounds bounds;
  std::optional<Plan> plan;        // witness of bounds.upper
  std::vector<Direction> moves;    // plan serialized to agent moves
  std::vector<int> upper_trace;    // successive upper bounds
};

namespace detail {

class BudgetClock {
 public:
  explicit BudgetClock(const BudgetPolicy& p) : policy_(p), start_(std::chrono::steady_clock::now()) {}

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  /// Budget for the next call; nullopt once the overall budget is spent.
  std::optional<double> next_call() const {
    double budget = policy_.per_call;
    if (policy_.overall > 0) {
      double left = policy_.overall - elapsed();
      if (left <= 0) return std::nullopt;
      budget = budget > 0 ? std::min(budget, left) : left;
    }
    return budget;
  }

 private:
  BudgetPolicy policy_;
  std::chrono::steady_clock::time_point start_;
};

struct Probe {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<Plan> plan;
};

inline Probe probe(const Level& lv, const EncodingConfig& cfg, Backend& backend, const BudgetClock& clock,
                   const char* phase, std::vector<HorizonProbe>& log) {
  auto budget = clock.next_call();
  if (!budget) return {};
  Encoding enc = encode(lv, cfg);
  SolveOutcome out = backend.solve(enc.formula, *budget);
  log.push_back({phase, cfg.horizon, out.status, out.elapsed});
  Probe p{out.status, std::nullopt};
  if (out.sat()) p.plan = decode(enc, lv, out.model);
  return p;
}

}  // namespace detail

/// Iterative deepening. FULL minimizes moves, COLLAPSED minimizes object
/// actions.
inline SearchOutcome solve_sequential(const Level& lv, Mode mode, ReachKind reach, Backend& backend,
                                      const BudgetPolicy& policy = {}) {
  if (mode != Mode::Full && mode != Mode::Collapsed) throw ContractError("sequential search needs FULL or COLLAPSED");
  detail::BudgetClock clock(policy);
  SearchOutcome out;
  out.bounds.lower = 0;
  for (int T = 0; T <= policy.horizon_cap; ++T) {
    detail::Probe p = detail::probe(lv, {mode, reach, T}, backend, clock, "sequential", out.bounds.probes);
    if (p.status == SolveStatus::Unsat) {
      out.bounds.lower = T + 1;
      continue;
    }
    if (p.status == SolveStatus::Unknown) {
      out.bounds.status = BoundStatus::Bounded;
      return out;
    }
    out.bounds.upper = T;
    out.upper_trace.push_back(T);
    out.moves = serialize(lv, *p.plan);
    out.plan = std::move(p.plan);
    out.bounds.status = BoundStatus::Optimal;
    return out;
  }
  out.bounds.status = BoundStatus::Bounded;
  return out;
}

/// Minimal parallel horizon; the upper bound is the number of object actions
/// in the decoded plan.
inline SearchOutcome ascend_parallel(const Level& lv, ReachKind reach, Backend& backend,
                                     const BudgetPolicy& policy = {}) {
  detail::BudgetClock clock(policy);
  SearchOutcome out;
  for (int T = 0; T <= policy.horizon_cap; ++T) {
    detail::Probe p = detail::probe(lv, {Mode::Parallel, reach, T}, backend, clock, "ascend", out.bounds.probes);
    if (p.status == SolveStatus::Unsat) continue;
    if (p.status == SolveStatus::Unknown) break;
    const int ub = static_cast<int>(p.plan->object_actions());
    out.moves = serialize(lv, *p.plan);
    out.plan = std::move(p.plan);
    out.bounds.upper = ub;
    out.upper_trace.push_back(ub);
    out.bounds.status = BoundStatus::Bounded;
    if (ub == 0) {
      out.bounds.lower = 0;
      out.bounds.status = BoundStatus::Optimal;
    }
    return out;
  }
  out.bounds.status = BoundStatus::Unknown;
  return out;
}

/// Probes T = UB - 1 with noop padding until UNSAT. A model with k < T object
/// actions drops the bound straight to k.
inline SearchOutcome descend(const Level& lv, int upper, std::optional<Plan> witness, ReachKind reach,
                             Backend& backend, const BudgetPolicy& policy = {}) {
  if (upper < 0) throw ContractError("negative upper bound");
  detail::BudgetClock clock(policy);
  SearchOutcome out;
  out.bounds.upper = upper;
  out.upper_trace.push_back(upper);
  out.plan = std::move(witness);
  while (true) {
    if (*out.bounds.upper == 0) {
      out.bounds.lower = 0;
      out.bounds.status = BoundStatus::Optimal;
      break;
    }
    const int T = *out.bounds.upper - 1;
    detail::Probe p = detail::probe(lv, {Mode::Descend, reach, T}, backend, clock, "descend", out.bounds.probes);
    if (p.status == SolveStatus::Unsat) {
      out.bounds.lower = *out.bounds.upper;
      out.bounds.status = BoundStatus::Optimal;
      break;
    }
    if (p.status == SolveStatus::Unknown) {
      out.bounds.status = BoundStatus::Bounded;
      break;
    }
    const int k = static_cast<int>(p.plan->object_actions());
    out.bounds.upper = k;
    out.upper_trace.push_back(k);
    out.plan = std::move(p.plan);
  }
  if (out.plan) out.moves = serialize(lv, *out.plan);
  return out;
}

struct HybridOptions {
  ReachKind ascend_reach = ReachKind::Tree;
  ReachKind descend_reach = ReachKind::Path;
  BudgetPolicy ascend;
  BudgetPolicy descend;
};

inline SearchOutcome solve_hybrid(const Level& lv, Backend& backend, const HybridOptions& opts = {}) {
  SearchOutcome up = ascend_parallel(lv, opts.ascend_reach, backend, opts.ascend);
  if (!up.bounds.upper || up.bounds.status == BoundStatus::Optimal) return up;
  SearchOutcome down = descend(lv, *up.bounds.upper, up.plan, opts.descend_reach, backend, opts.descend);
  SearchOutcome out = std::move(down);
  out.bounds.probes.insert(out.bounds.probes.begin(), up.bounds.probes.begin(), up.bounds.probes.end());
  return out;
}

}  // namespace gridsat
