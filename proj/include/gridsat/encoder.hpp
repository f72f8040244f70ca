#pragma once

// Compiles (level, horizon, mode, reachability encoding) into CNF.
//
// State fluents per floor cell c and timestep t in 0..T:
//   small[c,t] medium[c,t] large[c,t] snow[c,t] agent[c,t]   (Snowman)
//   box[c,t] agent[c,t]                                        (Sokoban)
//
// Modes:
//   FULL       one agent move per step, dir[D,t] for D in N,S,E,W
//   COLLAPSED  one object action act[c,D,t] per step (ball cell c pushed in
//              direction D); walking is replaced by reachability of the
//              acting cell c-D from the agent through ball-free cells
//   PARALLEL   any set of non-interfering object actions per step, or one
//              jump[c,t]; acting cells must be reachable avoiding cells
//              occupied at t or t+1; the agent only moves by jumping
//   DESCEND    COLLAPSED plus noop[t], trailing noops only
//
// Each action is split into cases (move/roll/push/pop plus size and snow
// variants) with conjunctive preconditions and effects; frame axioms allow a
// fluent to change only through a case whose effects mention it.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsat/cnf.hpp"
#include "gridsat/game.hpp"
#include "gridsat/level.hpp"
#include "gridsat/reach.hpp"

namespace gridsat {

enum class Mode { Full, Collapsed, Parallel, Descend };
enum class ReachKind { Path, Dag, Tree };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Full: return "full";
    case Mode::Collapsed: return "collapsed";
    case Mode::Parallel: return "parallel";
    default: return "descend";
  }
}

inline const char* to_string(ReachKind r) {
  switch (r) {
    case ReachKind::Path: return "path";
    case ReachKind::Dag: return "dag";
    default: return "tree";
  }
}

struct EncodingConfig {
  Mode mode = Mode::Collapsed;
  ReachKind reach = ReachKind::Path;  // ignored by FULL
  int horizon = 0;
  bool invariants = true;
  bool goal = true;  // false leaves the final state unconstrained
};

enum class Fluent : std::uint8_t { Small, Medium, Large, Snow, Box, Agent };

inline const char* to_string(Fluent f) {
  constexpr const char* names[] = {"small", "medium", "large", "snow", "box", "agent"};
  return names[static_cast<int>(f)];
}

inline Fluent ball_fluent(BallSize s) {
  return s == BallSize::Small ? Fluent::Small : s == BallSize::Medium ? Fluent::Medium : Fluent::Large;
}

struct FluentLit {
  Fluent fluent;
  int cell;
  bool value;
};

/// One deterministic way an agent move can play out.
struct ActionCase {
  StepKind kind = StepKind::Move;
  int acting = -1;  // agent cell before the move
  Direction dir = Direction::N;
  int ball = -1;    // cell entered by the move (object cell for object actions)
  int dest = -1;    // cell two steps ahead, -1 for plain moves
  std::string variant;
  std::vector<FluentLit> pre;
  std::vector<FluentLit> eff;  // excludes the agent
  int agent_after = -1;
};

namespace detail {

inline void single_ball(std::vector<FluentLit>& out, int cell, BallSize x) {
  for (BallSize s : {BallSize::Small, BallSize::Medium, BallSize::Large}) {
    out.push_back({ball_fluent(s), cell, s == x});
  }
}

inline void no_ball(std::vector<FluentLit>& out, int cell) {
  for (BallSize s : {BallSize::Small, BallSize::Medium, BallSize::Large}) {
    out.push_back({ball_fluent(s), cell, false});
  }
}

inline char size_letter(BallSize s) { return s == BallSize::Small ? 'S' : s == BallSize::Medium ? 'M' : 'L'; }

}  // namespace detail

/// All cases for every (acting cell, direction). Snow variants are produced
/// only where the level has snow initially, since snow is never created.
inline std::vector<ActionCase> enumerate_cases(const Level& lv, bool with_moves) {
  std::vector<ActionCase> out;
  const bool snowman = lv.game == Game::Snowman;
  for (int l = 0; l < lv.cells(); ++l) {
    if (lv.wall[l]) continue;
    for (Direction d : kDirections) {
      const int l1 = lv.step(l, d);
      if (!lv.is_floor(l1)) continue;
      const int l2 = lv.step(l1, d);
      ActionCase base;
      base.acting = l;
      base.dir = d;
      base.ball = l1;
      if (with_moves) {
        ActionCase mv = base;
        mv.kind = StepKind::Move;
        mv.variant = "walk";
        if (snowman) detail::no_ball(mv.pre, l1);
        else mv.pre.push_back({Fluent::Box, l1, false});
        mv.agent_after = l1;
        out.push_back(std::move(mv));
      }
      if (!lv.is_floor(l2)) continue;
      base.dest = l2;
      if (!snowman) {
        ActionCase push = base;
        push.kind = StepKind::Push;
        push.variant = "box";
        push.pre = {{Fluent::Box, l1, true}, {Fluent::Box, l2, false}};
        push.eff = {{Fluent::Box, l1, false}, {Fluent::Box, l2, true}};
        push.agent_after = l1;
        out.push_back(std::move(push));
        continue;
      }
      const std::vector<bool> snow_options =
          lv.snow[l2] ? std::vector<bool>{false, true} : std::vector<bool>{false};
      // roll a single ball onto an empty cell
      for (BallSize x : {BallSize::Small, BallSize::Medium, BallSize::Large}) {
        for (bool snowy : snow_options) {
          ActionCase c = base;
          c.kind = StepKind::Roll;
          c.variant = std::string(1, detail::size_letter(x)) + (snowy ? "*" : "");
          detail::single_ball(c.pre, l1, x);
          detail::no_ball(c.pre, l2);
          if (lv.snow[l2]) c.pre.push_back({Fluent::Snow, l2, snowy});
          BallSize landed = snowy ? grown(x) : x;
          c.eff.push_back({ball_fluent(x), l1, false});
          c.eff.push_back({ball_fluent(landed), l2, true});
          if (snowy) c.eff.push_back({Fluent::Snow, l2, false});
          c.agent_after = l1;
          out.push_back(std::move(c));
        }
      }
      // push a single ball onto a stack whose top is bigger
      struct Onto {
        BallSize x;
        std::vector<FluentLit> (*stack)(int);
        const char* name;
      };
      const Onto ontos[] = {
          {BallSize::Small,
           [](int c) { return std::vector<FluentLit>{{Fluent::Small, c, false}, {Fluent::Medium, c, true}}; },
           "S>M"},
          {BallSize::Small,
           [](int c) {
             return std::vector<FluentLit>{
                 {Fluent::Small, c, false}, {Fluent::Medium, c, false}, {Fluent::Large, c, true}};
           },
           "S>L"},
          {BallSize::Medium,
           [](int c) {
             return std::vector<FluentLit>{
                 {Fluent::Small, c, false}, {Fluent::Medium, c, false}, {Fluent::Large, c, true}};
           },
           "M>L"},
      };
      for (const Onto& o : ontos) {
        ActionCase c = base;
        c.kind = StepKind::Push;
        c.variant = o.name;
        detail::single_ball(c.pre, l1, o.x);
        auto st = o.stack(l2);
        c.pre.insert(c.pre.end(), st.begin(), st.end());
        c.eff.push_back({ball_fluent(o.x), l1, false});
        c.eff.push_back({ball_fluent(o.x), l2, true});
        c.agent_after = l1;
        out.push_back(std::move(c));
      }
      // pop the top ball of a stack onto an empty cell; the agent stays
      struct Pop {
        BallSize top;
        std::vector<FluentLit> pre;
        const char* name;
      };
      const Pop pops[] = {
          {BallSize::Small, {{Fluent::Small, l1, true}, {Fluent::Medium, l1, true}}, "S/M"},
          {BallSize::Small, {{Fluent::Small, l1, true}, {Fluent::Medium, l1, false}, {Fluent::Large, l1, true}},
           "S/L"},
          {BallSize::Medium, {{Fluent::Small, l1, false}, {Fluent::Medium, l1, true}, {Fluent::Large, l1, true}},
           "M/L"},
      };
      for (const Pop& p : pops) {
        for (bool snowy : snow_options) {
          ActionCase c = base;
          c.kind = StepKind::Pop;
          c.variant = std::string(p.name) + (snowy ? "*" : "");
          c.pre = p.pre;
          detail::no_ball(c.pre, l2);
          if (lv.snow[l2]) c.pre.push_back({Fluent::Snow, l2, snowy});
          BallSize landed = snowy ? grown(p.top) : p.top;
          c.eff.push_back({ball_fluent(p.top), l1, false});
          c.eff.push_back({ball_fluent(landed), l2, true});
          if (snowy) c.eff.push_back({Fluent::Snow, l2, false});
          c.agent_after = l;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

struct Encoding {
  Formula formula;
  EncodingConfig config;
  Game game = Game::Snowman;
};

// Registry names shared with the decoder.
inline std::string fluent_name(Fluent fl, int cell, int t) {
  return std::string(to_string(fl)) + "[" + std::to_string(cell) + "," + std::to_string(t) + "]";
}
inline std::string dir_name(Direction d, int t) {
  return std::string("dir[") + direction_letter(d) + "," + std::to_string(t) + "]";
}
inline std::string act_name(int cell, Direction d, int t) {
  return "act[" + std::to_string(cell) + "," + direction_letter(d) + "," + std::to_string(t) + "]";
}
inline std::string jump_name(int cell, int t) {
  return "jump[" + std::to_string(cell) + "," + std::to_string(t) + "]";
}
inline std::string noop_name(int t) { return "noop[" + std::to_string(t) + "]"; }

namespace detail {

class PlanningEncoder {
 public:
  PlanningEncoder(const Level& lv, const EncodingConfig& cfg)
      : lv_(lv), cfg_(cfg), graph_(grid_graph(lv)), cases_(enumerate_cases(lv, cfg.mode == Mode::Full)) {
    if (cfg.horizon < 0) throw ContractError("negative horizon");
    fluents_ = lv.game == Game::Snowman
                   ? std::vector<Fluent>{Fluent::Small, Fluent::Medium, Fluent::Large, Fluent::Snow}
                   : std::vector<Fluent>{Fluent::Box};
  }

  Encoding build() {
    const int T = cfg_.horizon;
    for (int t = 0; t <= T; ++t) make_state(t);
    initial_state();
    for (int t = 0; t < T; ++t) transition(t);
    if (cfg_.goal) goal(T);
    if (cfg_.invariants && lv_.game == Game::Snowman) {
      for (int t = 0; t <= T; ++t) invariants(t);
    }
    return Encoding{std::move(f_), cfg_, lv_.game};
  }

 private:
  using FluentVars = std::array<std::vector<Term>, 6>;

  Term fl(Fluent fluent, int cell, int t) const { return state_[t][static_cast<int>(fluent)][cell]; }
  Term fl(const FluentLit& x, int t) const {
    Term v = fl(x.fluent, x.cell, t);
    return x.value ? v : ~v;
  }
  Lit agent(int cell, int t) const { return fl(Fluent::Agent, cell, t).lit(); }

  int vertex(int cell) const { return graph_.grid()->vertex_of_cell[cell]; }
  int cell_of(int v) const { return graph_.grid()->cell_of_vertex[v]; }
  std::string tstr(int t) const { return std::to_string(t); }

  void make_state(int t) {
    FluentVars vars;
    for (auto& v : vars) v.assign(lv_.cells(), Term::falsity());
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      for (Fluent x : fluents_) {
        // snow never appears where there was none
        if (x == Fluent::Snow && !lv_.snow[c]) continue;
        vars[static_cast<int>(x)][c] = Term(f_.fresh_var(fluent_name(x, c, t)));
      }
      vars[static_cast<int>(Fluent::Agent)][c] = Term(f_.fresh_var(fluent_name(Fluent::Agent, c, t)));
    }
    state_.push_back(std::move(vars));
  }

  void initial_state() {
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      for (Fluent x : fluents_) {
        bool value = false;
        switch (x) {
          case Fluent::Small: value = lv_.stack[c] & bit(BallSize::Small); break;
          case Fluent::Medium: value = lv_.stack[c] & bit(BallSize::Medium); break;
          case Fluent::Large: value = lv_.stack[c] & bit(BallSize::Large); break;
          case Fluent::Snow: value = lv_.snow[c]; break;
          case Fluent::Box: value = lv_.stack[c] != 0; break;
          default: break;
        }
        f_.add({value ? fl(x, c, 0) : ~fl(x, c, 0)});
      }
      f_.add({c == lv_.agent ? Term(agent(c, 0)) : ~Term(agent(c, 0))});
    }
  }

  void goal(int T) {
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      if (lv_.game == Game::Snowman) {
        // no partial snowman anywhere
        Term s = fl(Fluent::Small, c, T), m = fl(Fluent::Medium, c, T), l = fl(Fluent::Large, c, T);
        f_.add({~s, m});
        f_.add({s, ~m});
        f_.add({~m, l});
        f_.add({m, ~l});
      } else if (!lv_.goal[c]) {
        f_.add({~fl(Fluent::Box, c, T)});
      }
    }
  }

  void invariants(int t) {
    const int snowmen = lv_.snowmen();
    std::vector<Lit> large, small;
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      large.push_back(fl(Fluent::Large, c, t).lit());
      small.push_back(fl(Fluent::Small, c, t).lit());
    }
    at_most_k(f_, large, snowmen);
    at_least_k(f_, small, snowmen);
  }

  /// Exactly one, pairwise for short lists and a sequential counter otherwise.
  void exactly_one_of(const std::vector<Lit>& lits) {
    if (lits.size() <= 6) {
      exactly_one(f_, lits);
      return;
    }
    f_.add_clause(Clause(lits.begin(), lits.end()));
    at_most_k(f_, lits, 1);
  }

  struct CaseVar {
    const ActionCase* spec;
    Var var;
  };

  // Case variables for step t with preconditions, effects and frame axioms.
  std::vector<CaseVar> cases_and_frame(int t) {
    std::vector<CaseVar> vars;
    vars.reserve(cases_.size());
    const bool full = cfg_.mode == Mode::Full;
    // adders/deleters per (fluent, cell)
    std::map<std::pair<int, int>, std::vector<Lit>> adds, dels;
    for (const ActionCase& c : cases_) {
      const char* kind = c.kind == StepKind::Move ? "move"
                         : c.kind == StepKind::Roll ? "roll"
                         : c.kind == StepKind::Push ? "push"
                                                    : "pop";
      Var k = f_.fresh_var(std::string(kind) + "[" + std::to_string(c.acting) + "," + direction_letter(c.dir) +
                           "," + tstr(t) + "," + c.variant + "]");
      vars.push_back({&c, k});
      for (const FluentLit& p : c.pre) f_.add({~Term(k), fl(p, t)});
      for (const FluentLit& e : c.eff) {
        f_.add({~Term(k), fl(e, t + 1)});
        (e.value ? adds : dels)[{static_cast<int>(e.fluent), e.cell}].push_back(k);
      }
      if (full && c.agent_after != c.acting) {
        f_.add({~Term(k), Term(agent(c.agent_after, t + 1))});
        f_.add({~Term(k), ~Term(agent(c.acting, t + 1))});
        adds[{static_cast<int>(Fluent::Agent), c.agent_after}].push_back(k);
        dels[{static_cast<int>(Fluent::Agent), c.acting}].push_back(k);
      }
    }
    std::vector<Fluent> framed = fluents_;
    if (full) framed.push_back(Fluent::Agent);
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      for (Fluent x : framed) {
        Term now = fl(x, c, t), next = fl(x, c, t + 1);
        if (now.is_constant()) continue;
        std::vector<Term> appear{now, ~next}, vanish{~now, next};
        if (auto it = adds.find({static_cast<int>(x), c}); it != adds.end()) {
          for (Lit k : it->second) appear.emplace_back(k);
        }
        if (auto it = dels.find({static_cast<int>(x), c}); it != dels.end()) {
          for (Lit k : it->second) vanish.emplace_back(k);
        }
        f_.add(appear);
        f_.add(vanish);
      }
    }
    return vars;
  }

  void transition(int t) {
    auto vars = cases_and_frame(t);
    switch (cfg_.mode) {
      case Mode::Full: full_step(t, vars); break;
      case Mode::Parallel: parallel_step(t, vars); break;
      default: sequential_object_step(t, vars); break;
    }
  }

  void full_step(int t, const std::vector<CaseVar>& vars) {
    std::array<Lit, 4> dirs;
    for (Direction d : kDirections) dirs[static_cast<int>(d)] = f_.fresh_var(dir_name(d, t));
    exactly_one(f_, dirs);
    std::map<std::pair<int, int>, std::vector<Lit>> by_move;
    for (const CaseVar& cv : vars) {
      f_.add({~Term(cv.var), Term(dirs[static_cast<int>(cv.spec->dir)])});
      f_.add({~Term(cv.var), Term(agent(cv.spec->acting, t))});
      by_move[{cv.spec->acting, static_cast<int>(cv.spec->dir)}].push_back(cv.var);
    }
    // a move is only possible through one of its cases
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      for (Direction d : kDirections) {
        std::vector<Term> clause{~Term(agent(c, t)), ~Term(dirs[static_cast<int>(d)])};
        if (auto it = by_move.find({c, static_cast<int>(d)}); it != by_move.end()) {
          for (Lit k : it->second) clause.emplace_back(k);
        }
        f_.add(clause);
      }
    }
  }

  struct ActVars {
    std::map<std::pair<int, int>, Var> act;  // (object cell, dir)
    std::map<int, std::vector<Lit>> by_acting;
    std::vector<Lit> all;
  };

  ActVars make_acts(int t, const std::vector<CaseVar>& vars) {
    ActVars out;
    std::map<std::pair<int, int>, std::vector<Lit>> cases_of;
    for (const CaseVar& cv : vars) cases_of[{cv.spec->ball, static_cast<int>(cv.spec->dir)}].push_back(cv.var);
    for (auto& [key, ks] : cases_of) {
      Direction d = static_cast<Direction>(key.second);
      Var a = f_.fresh_var(act_name(key.first, d, t));
      out.act.emplace(key, a);
      out.all.push_back(a);
      int acting = lv_.step(key.first, d == Direction::N   ? Direction::S
                                       : d == Direction::S ? Direction::N
                                       : d == Direction::E ? Direction::W
                                                           : Direction::E);
      out.by_acting[acting].push_back(a);
      std::vector<Term> some{~Term(a)};
      for (Lit k : ks) {
        f_.add({~Term(k), Term(a)});
        some.emplace_back(k);
      }
      f_.add(some);
    }
    return out;
  }

  Source agent_source(int t) const {
    Source src;
    for (int v = 0; v < graph_.size(); ++v) src.at.emplace_back(agent(cell_of(v), t));
    return src;
  }

  // occ[c,t] <-> some ball or box at c
  Lit occupied(int c, int t) {
    auto key = std::make_pair(c, t);
    if (auto it = occ_.find(key); it != occ_.end()) return it->second;
    Var o = f_.fresh_var("occ[" + std::to_string(c) + "," + tstr(t) + "]");
    std::vector<Term> any{~Term(o)};
    std::vector<Fluent> balls = lv_.game == Game::Snowman
                                    ? std::vector<Fluent>{Fluent::Small, Fluent::Medium, Fluent::Large}
                                    : std::vector<Fluent>{Fluent::Box};
    for (Fluent x : balls) {
      f_.add({~fl(x, c, t), Term(o)});
      any.push_back(fl(x, c, t));
    }
    f_.add(any);
    occ_.emplace(key, o);
    return o;
  }

  Gate ball_free_gate(int t) {
    Gate g;
    for (int v = 0; v < graph_.size(); ++v) g.free.emplace_back(~occupied(cell_of(v), t));
    return g;
  }

  // Targets for the path encoding: target[c] <-> some listed action acts from c.
  std::vector<Term> action_targets(const std::map<int, std::vector<Lit>>& by_acting, const std::string& tag) {
    std::vector<Term> tgt(graph_.size(), Term::falsity());
    for (const auto& [cell, acts] : by_acting) {
      Var x = f_.fresh_var("target[" + std::to_string(cell) + "," + tag + "]");
      std::vector<Term> some{~Term(x)};
      for (Lit a : acts) {
        f_.add({~Term(a), Term(x)});
        some.emplace_back(a);
      }
      f_.add(some);
      tgt[vertex(cell)] = Term(x);
    }
    return tgt;
  }

  // Reachability fragment requiring every listed acting cell; `active` is
  // true whenever some action is taken (path encoding only).
  void require_reachable(int t, const std::map<int, std::vector<Lit>>& by_acting, const Gate& gate, Term active,
                         const std::string& tag) {
    const Source src = agent_source(t);
    switch (cfg_.reach) {
      case ReachKind::Path: {
        auto tgt = action_targets(by_acting, tag);
        encode_path(f_, graph_, src, tgt, gate, active, tag);
        break;
      }
      case ReachKind::Dag:
      case ReachKind::Tree: {
        ReachFragment frag = cfg_.reach == ReachKind::Dag ? encode_dag(f_, graph_, src, gate, tag)
                                                          : encode_spanning_tree(f_, graph_, src, gate, tag);
        for (const auto& [cell, acts] : by_acting) {
          for (Lit a : acts) f_.add({~Term(a), Term(frag.reach[vertex(cell)])});
        }
        break;
      }
    }
  }

  void sequential_object_step(int t, const std::vector<CaseVar>& vars) {
    const bool descend = cfg_.mode == Mode::Descend;
    ActVars acts = make_acts(t, vars);
    std::optional<Var> noop;
    std::vector<Lit> choices = acts.all;
    if (descend) {
      noop = f_.fresh_var(noop_name(t));
      choices.push_back(*noop);
      if (t > 0) f_.add({~Term(f_.at(noop_name(t - 1))), Term(*noop)});
    }
    if (choices.empty()) {
      f_.add_clause(Clause{});
    } else {
      exactly_one_of(choices);
    }
    require_reachable(t, acts.by_acting, ball_free_gate(t), noop ? ~Term(*noop) : Term::truth(), tstr(t));

    // the agent ends where the executed case leaves it
    std::map<int, std::vector<Lit>> placing;
    for (const CaseVar& cv : vars) {
      placing[cv.spec->agent_after].push_back(cv.var);
      f_.add({~Term(cv.var), Term(agent(cv.spec->agent_after, t + 1))});
    }
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      std::vector<Term> why{~Term(agent(c, t + 1))};
      if (auto it = placing.find(c); it != placing.end()) {
        for (Lit k : it->second) why.emplace_back(k);
      }
      if (noop) {
        std::vector<Term> stay = why;
        why.emplace_back(*noop);
        stay.emplace_back(agent(c, t));
        f_.add(stay);
        f_.add({~Term(*noop), ~Term(agent(c, t)), Term(agent(c, t + 1))});
      }
      f_.add(why);
    }
  }

  void parallel_step(int t, const std::vector<CaseVar>& vars) {
    const std::string tag = tstr(t);
    ActVars acts = make_acts(t, vars);

    // jumps
    std::vector<Lit> jumps;
    std::map<int, std::vector<Lit>> jump_at;
    Var jumping = f_.fresh_var("jumping[" + tag + "]");
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      Var j = f_.fresh_var(jump_name(c, t));
      jumps.push_back(j);
      jump_at[c].push_back(j);
      f_.add({~Term(j), Term(jumping)});
      f_.add({~Term(j), ~Term(agent(c, t))});  // no idle jumps
    }
    {
      std::vector<Term> some{~Term(jumping)};
      for (Lit j : jumps) some.emplace_back(j);
      f_.add(some);
    }
    at_most_k(f_, jumps, 1);
    for (Lit a : acts.all) f_.add({~Term(a), ~Term(jumping)});  // jumps are exclusive

    // at least one action per step
    {
      std::vector<Term> some;
      for (Lit a : acts.all) some.emplace_back(a);
      some.emplace_back(jumping);
      f_.add(some);
    }

    // direct interference: no two actions share a ball source or destination
    std::map<int, std::vector<Lit>> touching;
    for (const auto& [key, a] : acts.act) {
      const int src = key.first;
      const int dst = lv_.step(src, static_cast<Direction>(key.second));
      touching[src].push_back(a);
      touching[dst].push_back(a);
    }
    for (auto& [cell, list] : touching) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) f_.add_clause({~list[i], ~list[j]});
      }
    }

    // object actions: reachable avoiding cells occupied now or next
    Gate occupancy;
    for (int v = 0; v < graph_.size(); ++v) {
      const int c = cell_of(v);
      Var g = f_.fresh_var("pfree[" + std::to_string(c) + "," + tag + "]");
      Lit now = occupied(c, t), next = occupied(c, t + 1);
      f_.add({~Term(g), ~Term(now)});
      f_.add({~Term(g), ~Term(next)});
      f_.add({Term(g), Term(now), Term(next)});
      occupancy.free.emplace_back(g);
    }
    if (cfg_.reach == ReachKind::Path) {
      replicated_paths(t, acts, occupancy);
    } else {
      require_reachable(t, acts.by_acting, occupancy, Term::truth(), tag + ",act");
    }
    // jumps: reachable under the current occupancy
    require_reachable(t, jump_at, ball_free_gate(t), Term(jumping), tag + ",jump");

    // the agent moves only by jumping
    for (int c = 0; c < lv_.cells(); ++c) {
      if (lv_.wall[c]) continue;
      Lit j = jump_at[c].front();
      Lit now = agent(c, t), next = agent(c, t + 1);
      f_.add({~Term(j), Term(next)});
      f_.add({Term(jumping), ~Term(now), Term(next)});
      f_.add({~Term(next), Term(j), ~Term(jumping)});
      f_.add({~Term(next), Term(j), Term(now)});
    }
  }

  // One path copy per ball; each acting cell needs some copy targeting it.
  void replicated_paths(int t, const ActVars& acts, const Gate& gate) {
    const std::string tag = tstr(t);
    const int copies = std::max(1, lv_.ball_count());
    const Source src = agent_source(t);
    std::map<int, Var> need;
    for (const auto& [cell, list] : acts.by_acting) {
      Var x = f_.fresh_var("need[" + std::to_string(cell) + "," + tag + "]");
      std::vector<Term> some{~Term(x)};
      for (Lit a : list) {
        f_.add({~Term(a), Term(x)});
        some.emplace_back(a);
      }
      f_.add(some);
      need.emplace(cell, x);
    }
    std::map<int, std::vector<Term>> covered;
    std::optional<Var> prev_sel;
    for (int k = 0; k < copies; ++k) {
      const std::string ktag = tag + ",act," + std::to_string(k);
      std::vector<Term> tgt(graph_.size(), Term::falsity());
      std::vector<Lit> tlits;
      Var sel = f_.fresh_var("sel[" + ktag + "]");
      std::vector<Term> any{~Term(sel)};
      for (const auto& [cell, x] : need) {
        Var y = f_.fresh_var("ptarget[" + std::to_string(cell) + "," + ktag + "]");
        f_.add({~Term(y), Term(x)});
        f_.add({~Term(y), Term(sel)});
        any.emplace_back(y);
        tgt[vertex(cell)] = Term(y);
        tlits.push_back(y);
        covered[cell].emplace_back(y);
      }
      f_.add(any);
      at_most_k(f_, tlits, 1);
      if (prev_sel) f_.add({~Term(sel), Term(*prev_sel)});  // copies are used in order
      prev_sel = sel;
      encode_path(f_, graph_, src, tgt, gate, Term(sel), ktag);
    }
    for (const auto& [cell, x] : need) {
      std::vector<Term> some{~Term(x)};
      for (const Term& y : covered[cell]) some.push_back(y);
      f_.add(some);
    }
  }

  const Level& lv_;
  EncodingConfig cfg_;
  Graph graph_;
  std::vector<ActionCase> cases_;
  std::vector<Fluent> fluents_;
  Formula f_;
  std::vector<FluentVars> state_;
  std::map<std::pair<int, int>, Var> occ_;
};

}  // namespace detail

inline Encoding encode(const Level& lv, const EncodingConfig& cfg) {
  return detail::PlanningEncoder(lv, cfg).build();
}

inline Encoding encode_full(const Level& lv, int horizon) {
  return encode(lv, {Mode::Full, ReachKind::Path, horizon});
}

inline Encoding encode_collapsed(const Level& lv, int horizon, ReachKind reach) {
  return encode(lv, {Mode::Collapsed, reach, horizon});
}

inline Encoding encode_parallel(const Level& lv, int horizon, ReachKind reach) {
  return encode(lv, {Mode::Parallel, reach, horizon});
}

/// Plans of at most `horizon` object actions, padded with trailing noops.
inline Encoding encode_descend(const Level& lv, int horizon, ReachKind reach) {
  return encode(lv, {Mode::Descend, reach, horizon});
}

}  // namespace gridsat
