#pragma once

// Plans decoded from models, serialization of collapsed and parallel plans
// into agent moves, LURD strings and run records.
//
// LURD alphabet: l/u/r/d for walks, L/U/R/D for moves that roll, push or pop
// a ball (or push a box).
//
// Run record: one JSON object per line with fields
//   instance, game, mode, reach, lb, ub, status ("optimal" | "bounded" |
//   "unknown"), horizons [{phase, t, result, seconds}], seed, backend, lurd,
//   elapsed.
// `seconds` and `elapsed` are timing fields; everything else is
// deterministic for a fixed seed.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridsat/backend.hpp"
#include "gridsat/encoder.hpp"
#include "gridsat/game.hpp"

namespace gridsat {

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SerializeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReplayError : std::runtime_error {
  ReplayError(const std::string& what, std::size_t index) : std::runtime_error(what), index(index) {}
  std::size_t index;
};

/// Roll/push/pop of the ball at `cell` in direction `dir`.
struct ObjectAction {
  int cell = -1;
  Direction dir = Direction::N;

  friend bool operator==(const ObjectAction&, const ObjectAction&) = default;
};

struct PlanStep {
  std::vector<ObjectAction> actions;
  std::optional<int> jump;  // destination cell; exclusive of actions
};

struct Plan {
  enum class Form { Moves, Steps } form = Form::Steps;
  std::vector<Direction> moves;  // Form::Moves
  std::vector<PlanStep> steps;   // Form::Steps

  std::size_t object_actions() const {
    std::size_t n = 0;
    for (const PlanStep& s : steps) n += s.actions.size();
    return n;
  }
};

inline int acting_cell(const Level& lv, const ObjectAction& a) {
  constexpr Direction back[] = {Direction::S, Direction::N, Direction::W, Direction::E};
  return lv.step(a.cell, back[static_cast<int>(a.dir)]);
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

inline Plan decode(const Encoding& enc, const Level& lv, const std::vector<bool>& model) {
  const Formula& f = enc.formula;
  if (static_cast<int>(model.size()) < f.num_vars() + 1) throw DecodeError("model shorter than formula");
  const int T = enc.config.horizon;
  auto truth = [&](const std::string& name) {
    auto v = f.lookup(name);
    return v && model[v->index];
  };
  Plan plan;
  if (enc.config.mode == Mode::Full) {
    plan.form = Plan::Form::Moves;
    for (int t = 0; t < T; ++t) {
      std::optional<Direction> chosen;
      for (Direction d : kDirections) {
        if (!f.lookup(dir_name(d, t))) throw DecodeError("missing direction variable at t=" + std::to_string(t));
        if (!truth(dir_name(d, t))) continue;
        if (chosen) throw DecodeError("two directions at t=" + std::to_string(t));
        chosen = d;
      }
      if (!chosen) throw DecodeError("no direction at t=" + std::to_string(t));
      plan.moves.push_back(*chosen);
    }
    return plan;
  }
  plan.form = Plan::Form::Steps;
  for (int t = 0; t < T; ++t) {
    if (enc.config.mode == Mode::Descend && truth(noop_name(t))) continue;
    PlanStep step;
    for (int c = 0; c < lv.cells(); ++c) {
      if (lv.wall[c]) continue;
      for (Direction d : kDirections) {
        if (truth(act_name(c, d, t))) step.actions.push_back({c, d});
      }
      if (enc.config.mode == Mode::Parallel && truth(jump_name(c, t))) {
        if (step.jump) throw DecodeError("two jumps at t=" + std::to_string(t));
        step.jump = c;
      }
    }
    if (step.jump && !step.actions.empty()) throw DecodeError("jump combined with actions");
    if (enc.config.mode != Mode::Parallel && step.actions.size() != 1) {
      throw DecodeError("expected one action at t=" + std::to_string(t));
    }
    if (step.actions.empty() && !step.jump) throw DecodeError("empty step at t=" + std::to_string(t));
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Row-major by acting cell, then N, S, E, W.
inline void order_actions(const Level& lv, std::vector<ObjectAction>& actions) {
  std::sort(actions.begin(), actions.end(), [&](const ObjectAction& a, const ObjectAction& b) {
    int pa = acting_cell(lv, a), pb = acting_cell(lv, b);
    if (pa != pb) return pa < pb;
    return static_cast<int>(a.dir) < static_cast<int>(b.dir);
  });
}

namespace detail {

inline void walk_to(const Level& lv, GameState& s, int target, std::vector<Direction>& out) {
  auto walk = shortest_walk(lv, s, target);
  if (!walk) {
    throw SerializeError("no walk from cell " + std::to_string(s.agent) + " to cell " + std::to_string(target));
  }
  for (Direction d : *walk) {
    out.push_back(d);
    s = step(lv, s, d).state;
  }
}

inline void perform(const Level& lv, GameState& s, const ObjectAction& a, std::vector<Direction>& out) {
  walk_to(lv, s, acting_cell(lv, a), out);
  StepResult r = step(lv, s, a.dir);
  if (!is_object_action(r.kind)) {
    throw SerializeError("object action at cell " + std::to_string(a.cell) + " not applicable");
  }
  out.push_back(a.dir);
  s = std::move(r.state);
}

}  // namespace detail

/// Agent moves for a plan, with shortest walks inserted before each action.
/// Actions inside a step run in the order given by `order_actions` unless
/// `keep_order` is set.
inline std::vector<Direction> serialize(const Level& lv, const Plan& plan, bool keep_order = false) {
  if (plan.form == Plan::Form::Moves) return plan.moves;
  std::vector<Direction> out;
  GameState s = initial_state(lv);
  for (const PlanStep& st : plan.steps) {
    if (st.jump) detail::walk_to(lv, s, *st.jump, out);
    std::vector<ObjectAction> actions = st.actions;
    if (!keep_order) order_actions(lv, actions);
    for (const ObjectAction& a : actions) detail::perform(lv, s, a, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LURD
// ---------------------------------------------------------------------------

inline std::string to_lurd(const Level& lv, std::span<const Direction> moves) {
  RunResult run = run_plan(lv, moves);
  if (run.rejected_at) {
    throw ReplayError("move " + std::to_string(*run.rejected_at) + " is rejected", *run.rejected_at);
  }
  std::string out;
  out.reserve(moves.size());
  for (std::size_t i = 0; i < moves.size(); ++i) {
    char ch = lurd_letter(moves[i]);
    out += is_object_action(run.kinds[i]) ? static_cast<char>(ch - 'a' + 'A') : ch;
  }
  return out;
}

struct LurdMove {
  Direction dir;
  bool object;  // uppercase
};

inline std::vector<LurdMove> parse_lurd(std::string_view text) {
  std::vector<LurdMove> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t') continue;
    const char lower = static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch);
    Direction d;
    switch (lower) {
      case 'u': d = Direction::N; break;
      case 'd': d = Direction::S; break;
      case 'r': d = Direction::E; break;
      case 'l': d = Direction::W; break;
      default: throw ParseError("bad LURD character '" + std::string(1, ch) + "' at " + std::to_string(i));
    }
    out.push_back({d, lower != ch});
  }
  return out;
}

inline std::vector<Direction> directions_of(const std::vector<LurdMove>& moves) {
  std::vector<Direction> out;
  out.reserve(moves.size());
  for (const LurdMove& m : moves) out.push_back(m.dir);
  return out;
}

struct Validation {
  bool goal = false;
  bool case_ok = true;
  std::optional<std::size_t> rejected_at;
  std::optional<std::size_t> case_mismatch_at;
  std::size_t moves = 0;
  std::size_t object_actions = 0;

  bool ok() const { return goal && case_ok && !rejected_at; }
};

inline Validation validate(const Level& lv, std::string_view lurd) {
  auto parsed = parse_lurd(lurd);
  auto dirs = directions_of(parsed);
  RunResult run = run_plan(lv, dirs);
  Validation v;
  v.rejected_at = run.rejected_at;
  v.goal = run.goal;
  v.moves = run.kinds.size();
  for (std::size_t i = 0; i < run.kinds.size(); ++i) {
    const bool object = is_object_action(run.kinds[i]);
    v.object_actions += object;
    if (object != parsed[i].object && v.case_ok) {
      v.case_ok = false;
      v.case_mismatch_at = i;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

enum class BoundStatus { Optimal, Bounded, Unknown };

inline const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Optimal: return "optimal";
    case BoundStatus::Bounded: return "bounded";
    default: return "unknown";
  }
}

inline BoundStatus bound_status_from(std::string_view s) {
  if (s == "optimal") return BoundStatus::Optimal;
  if (s == "bounded") return BoundStatus::Bounded;
  if (s == "unknown") return BoundStatus::Unknown;
  throw ParseError("unknown status: " + std::string(s));
}

struct HorizonProbe {
  std::string phase;  // "sequential", "ascend", "descend"
  int horizon = 0;
  SolveStatus result = SolveStatus::Unknown;
  double seconds = 0;

  friend bool operator==(const HorizonProbe&, const HorizonProbe&) = default;
};

struct RunRecord {
  std::string instance;
  std::string game;
  std::string mode;
  std::string reach;
  std::optional<int> lb;
  std::optional<int> ub;
  BoundStatus status = BoundStatus::Unknown;
  std::vector<HorizonProbe> horizons;
  std::uint64_t seed = 0;
  std::string backend;
  std::optional<std::string> lurd;
  double elapsed = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

namespace detail {

inline nlohmann::ordered_json optional_int(const std::optional<int>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline SolveStatus solve_status_from(std::string_view s) {
  if (s == "sat") return SolveStatus::Sat;
  if (s == "unsat") return SolveStatus::Unsat;
  if (s == "unknown") return SolveStatus::Unknown;
  throw ParseError("unknown solve result: " + std::string(s));
}

}  // namespace detail

/// One line of JSON. With `timing` false the timing fields are omitted, which
/// gives the form used for determinism checks.
inline std::string to_json_line(const RunRecord& r, bool timing = true) {
  nlohmann::ordered_json j;
  j["instance"] = r.instance;
  j["game"] = r.game;
  j["mode"] = r.mode;
  j["reach"] = r.reach;
  j["lb"] = detail::optional_int(r.lb);
  j["ub"] = detail::optional_int(r.ub);
  j["status"] = to_string(r.status);
  auto probes = nlohmann::ordered_json::array();
  for (const HorizonProbe& p : r.horizons) {
    nlohmann::ordered_json pj;
    pj["phase"] = p.phase;
    pj["t"] = p.horizon;
    pj["result"] = to_string(p.result);
    if (timing) pj["seconds"] = p.seconds;
    probes.push_back(std::move(pj));
  }
  j["horizons"] = std::move(probes);
  j["seed"] = r.seed;
  j["backend"] = r.backend;
  j["lurd"] = r.lurd ? nlohmann::ordered_json(*r.lurd) : nlohmann::ordered_json(nullptr);
  if (timing) j["elapsed"] = r.elapsed;
  return j.dump();
}

inline RunRecord parse_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad run record: ") + e.what());
  }
  try {
    RunRecord r;
    r.instance = j.at("instance").get<std::string>();
    r.game = j.at("game").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.reach = j.at("reach").get<std::string>();
    if (!j.at("lb").is_null()) r.lb = j.at("lb").get<int>();
    if (!j.at("ub").is_null()) r.ub = j.at("ub").get<int>();
    r.status = bound_status_from(j.at("status").get<std::string>());
    for (const auto& pj : j.at("horizons")) {
      HorizonProbe p;
      p.phase = pj.at("phase").get<std::string>();
      p.horizon = pj.at("t").get<int>();
      p.result = detail::solve_status_from(pj.at("result").get<std::string>());
      p.seconds = pj.value("seconds", 0.0);
      r.horizons.push_back(std::move(p));
    }
    r.seed = j.at("seed").get<std::uint64_t>();
    r.backend = j.at("backend").get<std::string>();
    if (!j.at("lurd").is_null()) r.lurd = j.at("lurd").get<std::string>();
    r.elapsed = j.value("elapsed", 0.0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad run record: ") + e.what());
  }
}

}  // namespace gridsat
