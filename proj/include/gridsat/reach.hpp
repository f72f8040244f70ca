#pragma once

// Reachability encodings over a caller-owned Formula:
//
//   encode_dag            - acyclic justification via selected edges and a
//                           transitive ordering relation (sound: r_v implies
//                           reachable, and any reachable target can be set).
//   encode_path           - grid s-t path via per-cell degree constraints.
//   encode_spanning_tree  - tree of paths rooted at the source; every model
//                           sets r_v exactly for the reachable vertices.
//
// Each encoder accepts a fixed source vertex or per-vertex source terms (the
// planning encoders use the agent location literals), and a Gate that marks
// vertices traversable. Registry names are "<kind>[<args>]" with the caller's
// tag appended as the last argument, e.g. "r[7,3]" or "tree[2,5,3,occ]".

#include <bit>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridsat/cnf.hpp"
#include "gridsat/graph.hpp"

namespace gridsat {

struct Gate {
  std::vector<Term> free;  // per vertex

  static Gate always_free(int n) { return Gate{std::vector<Term>(n, Term::truth())}; }

  static Gate from_vars(const std::vector<Var>& vars) {
    Gate g;
    for (Var v : vars) g.free.emplace_back(v);
    return g;
  }
};

/// Per-vertex source indicator. A fixed source is all constants.
struct Source {
  std::vector<Term> at;

  static Source vertex(int n, int s) {
    if (s < 0 || s >= n) throw ContractError("source vertex out of range");
    Source src{std::vector<Term>(n, Term::falsity())};
    src.at[s] = Term::truth();
    return src;
  }
};

struct ReachFragment {
  std::vector<Var> reach;      // r_v (path membership for the path encoding)
  std::vector<Var> auxiliary;  // edge, order and tree variables
  std::size_t first_clause = 0;
  std::size_t clause_count = 0;
};

namespace detail {

inline std::string reach_name(const char* kind, std::initializer_list<int> args, const std::string& tag) {
  std::string s = kind;
  s += '[';
  bool first = true;
  for (int a : args) {
    if (!first) s += ',';
    s += std::to_string(a);
    first = false;
  }
  if (!tag.empty()) {
    if (!first) s += ',';
    s += tag;
  }
  s += ']';
  return s;
}

inline void check_sizes(const Graph& g, const Source& src, const Gate& gate) {
  if (static_cast<int>(src.at.size()) != g.size()) throw ContractError("source size mismatch");
  if (static_cast<int>(gate.free.size()) != g.size()) throw ContractError("gate size mismatch");
}

// Lazily created pair variables, restricted to pairs that can ever be related.
class PairVars {
 public:
  PairVars(Formula& f, const char* kind, std::string tag, ReachFragment& frag)
      : f_(f), kind_(kind), tag_(std::move(tag)), frag_(frag) {}

  Var get(int a, int b) {
    auto key = std::make_pair(a, b);
    auto it = vars_.find(key);
    if (it != vars_.end()) return it->second;
    Var v = f_.fresh_var(reach_name(kind_, {a, b}, tag_));
    frag_.auxiliary.push_back(v);
    vars_.emplace(key, v);
    return v;
  }

 private:
  Formula& f_;
  const char* kind_;
  std::string tag_;
  ReachFragment& frag_;
  std::map<std::pair<int, int>, Var> vars_;
};

inline std::vector<Var> make_reach_vars(Formula& f, int n, const char* kind, const std::string& tag) {
  std::vector<Var> r;
  r.reserve(n);
  for (int v = 0; v < n; ++v) r.push_back(f.fresh_var(reach_name(kind, {v}, tag)));
  return r;
}

// guard -> (at least `lo` and at most `hi` of lits), by direct enumeration.
// Only used for neighbourhoods of at most four cells.
inline void guarded_between(Formula& f, const std::vector<Term>& guard, const std::vector<Lit>& lits,
                            int lo, int hi) {
  const int n = static_cast<int>(lits.size());
  auto emit = [&](const std::vector<Term>& body) {
    std::vector<Term> clause;
    for (const Term& g : guard) clause.push_back(~g);
    clause.insert(clause.end(), body.begin(), body.end());
    f.add(clause);
  };
  if (lo > n) {
    emit({});
    return;
  }
  // at least lo: every subset of size n-lo+1 has a true literal
  if (lo > 0) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != n - lo + 1) continue;
      std::vector<Term> body;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) body.emplace_back(lits[i]);
      }
      emit(body);
    }
  }
  // at most hi: no subset of size hi+1 is all true
  if (hi < n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != hi + 1) continue;
      std::vector<Term> body;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) body.emplace_back(~lits[i]);
      }
      emit(body);
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// DAG encoding
// ---------------------------------------------------------------------------

inline ReachFragment encode_dag(Formula& f, const Graph& input, const Source& src, const Gate& gate,
                                const std::string& tag = "") {
  detail::check_sizes(input, src, gate);
  // undirected input is read as the symmetric directed graph
  const Graph g = input.symmetrized();
  const int n = g.size();
  ReachFragment frag;
  frag.first_clause = f.num_clauses();
  frag.reach = detail::make_reach_vars(f, n, "r", tag);

  std::map<std::pair<int, int>, Var> edge;
  for (auto [a, b] : g.edges()) {
    Var e = f.fresh_var(detail::reach_name("edge", {a, b}, tag));
    frag.auxiliary.push_back(e);
    edge.emplace(std::make_pair(a, b), e);
  }

  // order variables t[a,b] only where b is statically reachable from a
  std::vector<std::vector<bool>> can_reach(n);
  for (int v = 0; v < n; ++v) can_reach[v] = bfs_reachable(g, v);
  detail::PairVars order(f, "ord", tag, frag);

  for (int v = 0; v < n; ++v) {
    const Lit r = frag.reach[v];
    f.add({~src.at[v], r});
    f.add({~r, gate.free[v]});
    std::vector<Term> justify{~Term(r), src.at[v]};
    for (int u : g.predecessors(v)) justify.emplace_back(edge.at({u, v}));
    f.add(justify);
  }
  for (auto [a, b] : g.edges()) {
    const Lit e = edge.at({a, b});
    f.add({~e, frag.reach[a]});
    f.add({~e, gate.free[b]});
    f.add({~e, order.get(a, b)});
    if (can_reach[b][a]) f.add({~e, ~order.get(b, a)});
    for (int c = 0; c < n; ++c) {
      if (c == a || c == b || !can_reach[b][c]) continue;
      f.add({~e, ~order.get(b, c), order.get(a, c)});
    }
  }
  frag.clause_count = f.num_clauses() - frag.first_clause;
  return frag;
}

inline ReachFragment encode_dag(Formula& f, const Graph& g, int source, const Gate& gate,
                                const std::string& tag = "") {
  return encode_dag(f, g, Source::vertex(g.size(), source), gate, tag);
}

// ---------------------------------------------------------------------------
// Path encoding (grids)
// ---------------------------------------------------------------------------

/// `target` holds per-vertex target terms; `active` switches the endpoint
/// degree constraints off for steps that need no path.
inline ReachFragment encode_path(Formula& f, const Graph& g, const Source& src,
                                 const std::vector<Term>& target, const Gate& gate,
                                 Term active = Term::truth(), const std::string& tag = "") {
  detail::check_sizes(g, src, gate);
  if (!g.grid()) throw ContractError("path encoding needs grid metadata");
  if (g.is_directed()) throw ContractError("path encoding needs an undirected grid graph");
  if (static_cast<int>(target.size()) != g.size()) throw ContractError("target size mismatch");
  const int n = g.size();
  ReachFragment frag;
  frag.first_clause = f.num_clauses();
  frag.reach = detail::make_reach_vars(f, n, "path", tag);

  for (int v = 0; v < n; ++v) {
    const Lit p = frag.reach[v];
    f.add({~src.at[v], p});
    f.add({~target[v], p});
    f.add({~Term(p), gate.free[v]});
    f.add({~src.at[v], gate.free[v]});
    std::vector<Lit> around;
    for (int u : g.neighbours(v)) around.push_back(frag.reach[u]);
    // endpoints: exactly one path neighbour when source and target differ
    detail::guarded_between(f, {src.at[v], ~target[v], active}, around, 1, 1);
    detail::guarded_between(f, {target[v], ~src.at[v]}, around, 1, 1);
    // interior: exactly two
    detail::guarded_between(f, {Term(p), ~src.at[v], ~target[v]}, around, 2, 2);
  }
  frag.clause_count = f.num_clauses() - frag.first_clause;
  return frag;
}

inline ReachFragment encode_path(Formula& f, const Graph& g, int source, int target, const Gate& gate,
                                 const std::string& tag = "") {
  if (target < 0 || target >= g.size()) throw ContractError("target vertex out of range");
  std::vector<Term> tgt(g.size(), Term::falsity());
  tgt[target] = Term::truth();
  return encode_path(f, g, Source::vertex(g.size(), source), tgt, gate, Term::truth(), tag);
}

// ---------------------------------------------------------------------------
// Spanning-tree encoding
// ---------------------------------------------------------------------------

inline ReachFragment encode_spanning_tree(Formula& f, const Graph& g, const Source& src, const Gate& gate,
                                          const std::string& tag = "") {
  detail::check_sizes(g, src, gate);
  if (g.is_directed()) throw ContractError("spanning-tree encoding needs an undirected graph");
  const int n = g.size();
  ReachFragment frag;
  frag.first_clause = f.num_clauses();
  frag.reach = detail::make_reach_vars(f, n, "r", tag);
  // tree[a,b]: a path from a to b exists in the tree; pairs in different
  // static components are constantly false and never materialized
  const std::vector<int> comp = g.components();
  detail::PairVars tree(f, "tree", tag, frag);

  for (int v = 0; v < n; ++v) {
    const Lit r = frag.reach[v];
    f.add({~src.at[v], r});         // root
    f.add({~r, gate.free[v]});
    std::vector<Term> parents{~Term(r), src.at[v]};
    std::vector<Lit> incoming;
    for (int u : g.neighbours(v)) {
      incoming.push_back(tree.get(u, v));
      parents.emplace_back(tree.get(u, v));
    }
    f.add(parents);                 // some path into every reachable non-source
    for (std::size_t i = 0; i < incoming.size(); ++i) {
      for (std::size_t j = i + 1; j < incoming.size(); ++j) {
        f.add_clause({~incoming[i], ~incoming[j]});  // at most one path in
      }
      f.add({~src.at[v], ~incoming[i]});           // the root has no parent
    }
  }
  for (int v = 0; v < n; ++v) {
    for (int w : g.neighbours(v)) {
      const Lit t_vw = tree.get(v, w);
      f.add({~Term(frag.reach[v]), ~gate.free[w], frag.reach[w]});  // propagation
      f.add({~src.at[v], ~gate.free[w], t_vw});                      // outgoing from root
      f.add({~t_vw, frag.reach[v]});
      f.add({~t_vw, frag.reach[w]});
      f.add({~t_vw, gate.free[w]});
      for (int x = 0; x < n; ++x) {
        if (x == w || comp[x] != comp[v]) continue;
        if (x == v) {
          f.add_clause({~t_vw, ~tree.get(w, v)});
          continue;
        }
        const Lit t_wx = tree.get(w, x);
        f.add_clause({~t_vw, ~t_wx, tree.get(v, x)});   // transitivity
        f.add_clause({~t_vw, ~t_wx, ~tree.get(x, v)});  // no cycles
      }
    }
  }
  frag.clause_count = f.num_clauses() - frag.first_clause;
  return frag;
}

inline ReachFragment encode_spanning_tree(Formula& f, const Graph& g, int source, const Gate& gate,
                                          const std::string& tag = "") {
  return encode_spanning_tree(f, g, Source::vertex(g.size(), source), gate, tag);
}

}  // namespace gridsat
