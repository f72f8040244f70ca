#pragma once

// Executable game rules: one-step transitions, goal test, plan replay and a
// brute-force optimal-length oracle. The oracle explores simulator states
// only and shares no code with the CNF encoders.

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gridsat/level.hpp"

namespace gridsat {

struct GameState {
  int agent = -1;
  std::vector<std::uint8_t> snow;
  std::vector<std::uint8_t> stack;

  friend bool operator==(const GameState&, const GameState&) = default;

  std::string key() const {
    std::string k;
    k.reserve(4 + 2 * stack.size());
    k.append(reinterpret_cast<const char*>(&agent), sizeof agent);
    for (std::size_t i = 0; i < stack.size(); ++i) {
      k += static_cast<char>(stack[i] | (snow[i] << 4));
    }
    return k;
  }
};

inline GameState initial_state(const Level& lv) {
  return GameState{lv.agent, lv.snow, lv.stack};
}

enum class StepKind : std::uint8_t { Rejected, Move, Roll, Push, Pop };

inline bool is_object_action(StepKind k) { return k == StepKind::Roll || k == StepKind::Push || k == StepKind::Pop; }

struct StepResult {
  StepKind kind = StepKind::Rejected;
  GameState state;  // unchanged input when rejected
};

namespace detail {

inline std::uint8_t top_bit(std::uint8_t stack) { return static_cast<std::uint8_t>(stack & -stack); }

// A ball arriving on the ground: snow is cleared and grows the ball.
inline void land_ball(GameState& s, int cell, std::uint8_t ball) {
  if (s.snow[cell]) {
    s.snow[cell] = 0;
    ball = bit(grown(static_cast<BallSize>(ball)));
  }
  s.stack[cell] = ball;
}

}  // namespace detail

inline StepResult step(const Level& lv, const GameState& s, Direction d) {
  StepResult res{StepKind::Rejected, s};
  const int ahead = lv.step(s.agent, d);
  if (!lv.is_floor(ahead)) return res;
  const std::uint8_t here = s.stack[ahead];
  if (here == 0) {
    res.kind = StepKind::Move;
    res.state.agent = ahead;
    return res;
  }
  const int beyond = lv.step(ahead, d);
  if (!lv.is_floor(beyond)) return res;
  const std::uint8_t there = s.stack[beyond];

  if (lv.game == Game::Sokoban) {
    if (there != 0) return res;
    res.kind = StepKind::Push;
    res.state.stack[ahead] = 0;
    res.state.stack[beyond] = 1;
    res.state.agent = ahead;
    return res;
  }

  if (std::popcount(here) == 1) {
    if (there == 0) {
      res.kind = StepKind::Roll;
      res.state.stack[ahead] = 0;
      detail::land_ball(res.state, beyond, here);
      res.state.agent = ahead;
    } else if (detail::top_bit(there) > here) {
      res.kind = StepKind::Push;
      res.state.stack[ahead] = 0;
      res.state.stack[beyond] = static_cast<std::uint8_t>(there | here);
      res.state.agent = ahead;
    }
    return res;
  }
  // a stack: the top ball pops off if it can land on an empty cell
  if (there != 0) return res;
  const std::uint8_t top = detail::top_bit(here);
  res.kind = StepKind::Pop;
  res.state.stack[ahead] = static_cast<std::uint8_t>(here & ~top);
  detail::land_ball(res.state, beyond, top);
  return res;
}

inline bool is_goal(const Level& lv, const GameState& s) {
  for (int cell = 0; cell < lv.cells(); ++cell) {
    if (lv.game == Game::Snowman) {
      if (s.stack[cell] != 0 && s.stack[cell] != kFullSnowman) return false;
    } else if (s.stack[cell] && !lv.goal[cell]) {
      return false;
    }
  }
  return true;
}

struct RunResult {
  GameState state;
  std::optional<std::size_t> rejected_at;
  std::vector<StepKind> kinds;  // per executed move
  bool goal = false;
};

inline RunResult run_plan(const Level& lv, std::span<const Direction> moves) {
  RunResult out{initial_state(lv), std::nullopt, {}, false};
  for (std::size_t i = 0; i < moves.size(); ++i) {
    StepResult r = step(lv, out.state, moves[i]);
    if (r.kind == StepKind::Rejected) {
      out.rejected_at = i;
      break;
    }
    out.kinds.push_back(r.kind);
    out.state = std::move(r.state);
  }
  out.goal = !out.rejected_at && is_goal(lv, out.state);
  return out;
}

/// Cells the agent can walk to without touching any ball or box.
inline std::vector<bool> walkable_region(const Level& lv, const GameState& s) {
  std::vector<bool> seen(lv.cells(), false);
  std::deque<int> queue{s.agent};
  seen[s.agent] = true;
  while (!queue.empty()) {
    int cell = queue.front();
    queue.pop_front();
    for (Direction d : kDirections) {
      int n = lv.step(cell, d);
      if (lv.is_floor(n) && !seen[n] && s.stack[n] == 0) {
        seen[n] = true;
        queue.push_back(n);
      }
    }
  }
  return seen;
}

/// Shortest walk (no object contact) from the agent to `target`, or nullopt.
inline std::optional<std::vector<Direction>> shortest_walk(const Level& lv, const GameState& s, int target) {
  if (target == s.agent) return std::vector<Direction>{};
  if (!lv.is_floor(target) || s.stack[target]) return std::nullopt;
  std::vector<int> parent(lv.cells(), -1);
  std::vector<Direction> via(lv.cells(), Direction::N);
  std::deque<int> queue{s.agent};
  parent[s.agent] = s.agent;
  while (!queue.empty()) {
    int cell = queue.front();
    queue.pop_front();
    if (cell == target) break;
    for (Direction d : kDirections) {
      int n = lv.step(cell, d);
      if (lv.is_floor(n) && parent[n] < 0 && s.stack[n] == 0) {
        parent[n] = cell;
        via[n] = d;
        queue.push_back(n);
      }
    }
  }
  if (parent[target] < 0) return std::nullopt;
  std::vector<Direction> walk;
  for (int cell = target; cell != s.agent; cell = parent[cell]) walk.push_back(via[cell]);
  return std::vector<Direction>(walk.rbegin(), walk.rend());
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

enum class Metric { Moves, ObjectActions };

struct OracleResult {
  enum class Status { Optimal, Unsolvable, CapExceeded } status = Status::CapExceeded;
  int optimum = -1;
  std::size_t states = 0;

  std::optional<int> value() const {
    return status == Status::Optimal ? std::optional<int>(optimum) : std::nullopt;
  }
};

namespace detail {

// Agent replaced by the smallest cell of its walkable region.
inline GameState canonical(const Level& lv, GameState s) {
  auto region = walkable_region(lv, s);
  for (int cell = 0; cell < lv.cells(); ++cell) {
    if (region[cell]) {
      s.agent = cell;
      break;
    }
  }
  return s;
}

}  // namespace detail

/// Breadth-first search over game states. MOVES counts every move;
/// OBJECT_ACTIONS counts roll/push/pop only, with walking free.
inline OracleResult oracle_optimal(const Level& lv, Metric metric, std::size_t cap = 2'000'000) {
  OracleResult out;
  GameState start = initial_state(lv);
  if (metric == Metric::ObjectActions) start = detail::canonical(lv, start);
  std::unordered_set<std::string> seen{start.key()};
  std::vector<GameState> layer{start};
  for (int depth = 0; !layer.empty(); ++depth) {
    std::vector<GameState> next;
    for (const GameState& s : layer) {
      if (is_goal(lv, s)) {
        out.status = OracleResult::Status::Optimal;
        out.optimum = depth;
        out.states = seen.size();
        return out;
      }
    }
    for (const GameState& s : layer) {
      auto expand = [&](const GameState& from, bool objects_only) {
        for (Direction d : kDirections) {
          StepResult r = step(lv, from, d);
          if (r.kind == StepKind::Rejected) continue;
          if (objects_only && !is_object_action(r.kind)) continue;
          GameState succ = objects_only ? detail::canonical(lv, std::move(r.state)) : std::move(r.state);
          if (seen.insert(succ.key()).second) next.push_back(std::move(succ));
        }
      };
      if (metric == Metric::Moves) {
        expand(s, false);
      } else {
        auto region = walkable_region(lv, s);
        GameState from = s;
        for (int cell = 0; cell < lv.cells(); ++cell) {
          if (!region[cell]) continue;
          from.agent = cell;
          expand(from, true);
        }
      }
      if (seen.size() > cap) {
        out.status = OracleResult::Status::CapExceeded;
        out.states = seen.size();
        return out;
      }
    }
    layer = std::move(next);
  }
  out.status = OracleResult::Status::Unsolvable;
  out.states = seen.size();
  return out;
}

}  // namespace gridsat
