// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exit status
// is nonzero iff some criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace gridsat;
using namespace gridsat::testing;

namespace {

// Pinned tolerances.
constexpr int kReachGraphs = 200;
constexpr int kMaxReachVertices = 12;
constexpr double kSizeSpread = 4.0;         // max/min of a normalized size across grid sizes
constexpr int kMinOracleFixtures = 10;
constexpr double kOracleBudget = 300.0;     // seconds for the whole agreement check
constexpr int kMinParallelRuns = 500;
constexpr std::size_t kMaxStepActions = 3;
constexpr int kDescendPadding = 3;
constexpr double kAssetBudget = 60.0;       // seconds per user-supplied level
constexpr double kPar2Limit = 10.0;

constexpr ReachKind kReaches[] = {ReachKind::Path, ReachKind::Dag, ReachKind::Tree};

enum class Verdict { Pass, Fail, Skip };

struct Result {
  Verdict verdict;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool sat_with(Formula f, std::initializer_list<Lit> units) {
  for (Lit l : units) f.add_clause({l});
  return solve(f).sat();
}

// 1 -------------------------------------------------------------------------

Result reachability_exactness() {
  std::mt19937_64 rng(1);
  const std::pair<int, int> shapes[] = {{2, 2}, {2, 3}, {3, 3}, {2, 5}, {3, 4}, {2, 6}, {1, 12}, {4, 3}};
  int tree_mismatch = 0, dag_mismatch = 0, path_mismatch = 0, pairs = 0;
  for (int g = 0; g < kReachGraphs; ++g) {
    auto [rows, cols] = shapes[g % std::size(shapes)];
    RandomGrid grid = random_grid(rng, rows, cols, 0.3);
    const int n = grid.graph.size();
    if (n > kMaxReachVertices) return {Verdict::Fail, "graph too large"};
    for (int s = 0; s < n; ++s) {
      if (!grid.free[s]) continue;
      auto reach = bfs_reachable(grid.graph, s, grid.free);
      Formula tree, dag;
      auto tf = encode_spanning_tree(tree, grid.graph, s, gate_of(grid.free));
      auto df = encode_dag(dag, grid.graph, s, gate_of(grid.free));
      for (int t = 0; t < n; ++t) {
        ++pairs;
        // both directions of the forced value must be decided
        if (sat_with(tree, {Lit(tf.reach[t], !reach[t])})) ++tree_mismatch;
        if (!sat_with(tree, {Lit(tf.reach[t], reach[t])})) ++tree_mismatch;
        if (sat_with(dag, {Lit(df.reach[t])}) != static_cast<bool>(reach[t])) ++dag_mismatch;
        Formula path;
        encode_path(path, grid.graph, s, t, gate_of(grid.free));
        if (solve(path).sat() != static_cast<bool>(reach[t])) ++path_mismatch;
      }
    }
  }
  std::ostringstream d;
  d << kReachGraphs << " graphs, " << pairs << " (s,t) pairs; mismatches tree " << tree_mismatch << ", dag "
    << dag_mismatch << ", path " << path_mismatch;
  return {tree_mismatch + dag_mismatch + path_mismatch == 0 ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 2 -------------------------------------------------------------------------

Result encoding_sizes() {
  std::map<std::string, std::pair<double, double>> range;  // series -> (min, max)
  auto note = [&](const std::string& series, double v) {
    auto [it, fresh] = range.try_emplace(series, v, v);
    if (!fresh) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  };
  std::mt19937_64 rng(2);
  for (int k = 2; k <= 8; ++k) {
    RandomGrid grid = random_grid(rng, k, k, 0.0);
    const double n = k * k, m = static_cast<double>(grid.graph.edge_count());
    Formula tree, dag, path;
    encode_spanning_tree(tree, grid.graph, 0, Gate::always_free(k * k));
    encode_dag(dag, grid.graph, 0, Gate::always_free(k * k));
    encode_path(path, grid.graph, 0, k * k - 1, Gate::always_free(k * k));
    note("tree clauses/NM", tree.num_clauses() / (n * m));
    note("tree vars/N^2", tree.num_vars() / (n * n));
    note("dag clauses/NM", dag.num_clauses() / (n * m));
    note("dag vars/N^2", dag.num_vars() / (n * n));
    note("path clauses/N", path.num_clauses() / n);
    note("path vars/N", path.num_vars() / n);
  }
  double worst = 0;
  std::string worst_series;
  for (const auto& [series, mm] : range) {
    const double spread = mm.second / mm.first;
    if (spread > worst) {
      worst = spread;
      worst_series = series;
    }
  }
  std::ostringstream d;
  d.precision(3);
  d << "grids 2x2..8x8, largest spread " << worst << " (" << worst_series << "), limit " << kSizeSpread;
  return {worst <= kSizeSpread ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 3 -------------------------------------------------------------------------

Result oracle_agreement() {
  auto start = Clock::now();
  int fixtures = 0, mismatches = 0;
  bool snow = false, soko = false;
  std::string first_bad;
  auto check = [&](bool ok, const std::string& what) {
    if (ok) return;
    if (mismatches++ == 0) first_bad = what;
  };
  for (const auto& path : oracle_fixtures()) {
    Fixture fx = load_fixture(path);
    if (fx.object_optimum < 0 || fx.states > 1'000'000) continue;
    ++fixtures;
    (fx.level.game == Game::Snowman ? snow : soko) = true;
    EmbeddedBackend b;
    SearchOutcome full = solve_sequential(fx.level, Mode::Full, ReachKind::Path, b);
    check(full.bounds.status == BoundStatus::Optimal && full.bounds.upper == fx.moves_optimum, fx.name + " full");
    for (ReachKind r : kReaches) {
      SearchOutcome col = solve_sequential(fx.level, Mode::Collapsed, r, b);
      check(col.bounds.status == BoundStatus::Optimal && col.bounds.upper == fx.object_optimum,
            fx.name + " collapsed/" + to_string(r));
      HybridOptions opts;
      opts.ascend_reach = opts.descend_reach = r;
      SearchOutcome hyb = solve_hybrid(fx.level, b, opts);
      check(hyb.bounds.status == BoundStatus::Optimal && hyb.bounds.upper == fx.object_optimum,
            fx.name + " hybrid/" + to_string(r));
      check(validate(fx.level, to_lurd(fx.level, hyb.moves)).ok(), fx.name + " hybrid plan replay");
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d.precision(3);
  d << fixtures << " fixtures, " << mismatches << " mismatches, " << elapsed << " s (limit " << kOracleBudget << " s)";
  if (mismatches) d << ", first: " << first_bad;
  const bool ok = fixtures >= kMinOracleFixtures && snow && soko && mismatches == 0 && elapsed <= kOracleBudget;
  return {ok ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 4 -------------------------------------------------------------------------

Result parallel_serializability() {
  int runs = 0, failures = 0, multi_steps = 0;
  std::size_t orderings = 0;
  for (std::uint64_t seed = 0; runs < kMinParallelRuns && seed < 20000; ++seed) {
    RandomLevelSpec spec;
    spec.rows = 5 + seed % 2;
    spec.cols = 6;
    spec.density = 0.15;
    if (seed % 3 == 0) {
      spec.game = Game::Sokoban;
      spec.boxes = 2 + seed % 2;
    }
    Level lv;
    try {
      lv = gen_random_level(seed, spec);
    } catch (const ContractError&) {
      continue;
    }
    EncodingConfig cfg{Mode::Parallel, kReaches[(seed / 3) % 3], 2};
    cfg.goal = false;
    Encoding enc = encode(lv, cfg);
    std::vector<Lit> acts0;
    for (int c = 0; c < lv.cells(); ++c) {
      for (Direction d : kDirections) {
        if (auto v = enc.formula.lookup(act_name(c, d, 0))) acts0.push_back(Lit(*v));
      }
    }
    Formula wide = enc.formula;
    at_least_k(wide, acts0, 2);
    SolveOutcome out = solve(wide, 0, seed);
    if (!out.sat()) out = solve(enc.formula, 0, seed);
    if (!out.sat()) continue;
    Plan plan = decode(enc, lv, out.model);
    bool small = true;
    for (const PlanStep& st : plan.steps) {
      small = small && st.actions.size() <= kMaxStepActions;
      multi_steps += st.actions.size() > 1;
    }
    if (!small) continue;
    ++runs;
    auto tried = every_ordering_serializes(lv, plan);
    if (!tried) ++failures;
    orderings += tried.value_or(0);
  }
  std::ostringstream d;
  d << runs << " parallel models, " << multi_steps << " multi-action steps, " << orderings << " orderings, "
    << failures << " failures";
  return {runs >= kMinParallelRuns && failures == 0 ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 5 -------------------------------------------------------------------------

Result blocking_fixtures() {
  int wrong = 0;
  std::ostringstream d;
  {
    Fixture fx = fixture("blocking_pair");
    const Level& lv = fx.level;
    for (ReachKind r : kReaches) {
      EncodingConfig cfg{Mode::Parallel, r, 1};
      cfg.goal = false;
      Encoding enc = encode(lv, cfg);
      Lit a(enc.formula.at(act_name(lv.cell(2, 4), Direction::W, 0)));
      Lit b(enc.formula.at(act_name(lv.cell(4, 5), Direction::E, 0)));
      wrong += !sat_with(enc.formula, {a});
      wrong += !sat_with(enc.formula, {b});
      wrong += sat_with(enc.formula, {a, b});
    }
  }
  {
    Fixture fx = fixture("blocking_self");
    const Level& lv = fx.level;
    for (ReachKind r : kReaches) {
      EncodingConfig one{Mode::Parallel, r, 1}, two{Mode::Parallel, r, 2};
      one.goal = two.goal = false;
      Encoding e1 = encode(lv, one), e2 = encode(lv, two);
      const int ball = lv.cell(3, 3);
      wrong += sat_with(e1.formula, {Lit(e1.formula.at(act_name(ball, Direction::E, 0)))});
      Formula f = e2.formula;
      f.add_clause({Lit(e2.formula.at(act_name(ball, Direction::E, 1)))});
      SolveOutcome out = solve(f);
      if (!out.sat()) {
        ++wrong;
        continue;
      }
      Plan plan = decode(e2, lv, out.model);
      wrong += !plan.steps[0].jump;
    }
  }
  d << "blocking_pair singles SAT and pair UNSAT, blocking_self UNSAT in one step and SAT after a jump, 3 reach encodings; "
    << wrong << " wrong outcomes";
  return {wrong == 0 ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 6 -------------------------------------------------------------------------

Result descend_drop() {
  Fixture fx = fixture("soko_corridor");
  const int start = fx.object_optimum + kDescendPadding;
  EmbeddedBackend b;
  SearchOutcome out = descend(fx.level, start, std::nullopt, ReachKind::Path, b);
  int biggest = 0;
  std::ostringstream trace;
  for (std::size_t i = 0; i < out.upper_trace.size(); ++i) {
    trace << (i ? " -> " : "") << out.upper_trace[i];
    if (i) biggest = std::max(biggest, out.upper_trace[i - 1] - out.upper_trace[i]);
  }
  const bool ok = out.bounds.status == BoundStatus::Optimal && out.bounds.upper == fx.object_optimum && biggest > 1;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fx.name + " optimum " + std::to_string(fx.object_optimum) + ", UB trace " + trace.str() +
              ", largest drop " + std::to_string(biggest)};
}

// 7 -------------------------------------------------------------------------

Result asset_reproduction() {
  auto dir = env_value("GRIDSAT_SNOWMAN_ASSETS");
  if (!dir) return {Verdict::Skip, "level assets not supplied (set GRIDSAT_SNOWMAN_ASSETS to a directory of .lvl files)"};
  const std::pair<const char*, int> expected[] = {
      {"andy", 6}, {"tanya", 5}, {"rebecca", 6}, {"lucy", 8}, {"lydia", 7}};
  const std::filesystem::path root(*dir);
  if (!std::filesystem::exists(root / "andy.lvl")) return {Verdict::Skip, "andy.lvl missing from " + *dir};
  std::ostringstream d;
  d.precision(3);
  bool ok = true;
  for (auto [name, optimum] : expected) {
    auto p = root / (std::string(name) + ".lvl");
    if (!std::filesystem::exists(p)) {
      d << name << " absent; ";
      continue;
    }
    Level lv = parse_snowman(read_file(p));
    SolveRequest req;
    req.instance = p.filename().string();
    req.timeout = kAssetBudget;
    SolveReport rep = run_solve(lv, req);
    const bool good = rep.record.status == BoundStatus::Optimal && rep.record.ub == optimum &&
                      rep.record.elapsed <= kAssetBudget;
    ok = ok && good;
    d << name << " " << (rep.record.ub ? std::to_string(*rep.record.ub) : "?") << "/" << optimum << " in "
      << rep.record.elapsed << " s; ";
    if (std::string(name) == "andy") {
      Validation v = validate(lv, "lluRurDlldddrUluRuurrrdLulD");
      ok = ok && v.ok() && v.object_actions == 6;
      d << "reference string " << (v.ok() ? "valid" : "invalid") << " with " << v.object_actions
        << " object actions; ";
    }
  }
  return {ok ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 8 -------------------------------------------------------------------------

Result par2_mechanics() {
  // solved in 1.5 s, solved in 2.25 s, timeout
  const std::map<std::string, std::optional<double>> pattern{
      {"a.lvl", 1.5}, {"b.lvl", 2.25}, {"c.lvl", std::nullopt}};
  BenchRunner runner = [&](const std::filesystem::path& p, const std::string&) {
    const auto& t = pattern.at(p.filename().string());
    return BenchRun{"", "", t.has_value(), t.value_or(kPar2Limit), {}};
  };
  auto runs = run_bench({"a.lvl", "b.lvl", "c.lvl"}, {"synthetic"}, runner, 3);
  const double score = par2(runs, kPar2Limit);
  const double expected = 1.5 + 2.25 + 2 * kPar2Limit;
  auto agg = aggregate(runs, kPar2Limit);
  const bool ok = score == expected && agg.size() == 1 && agg[0].par2 == expected && agg[0].solved == 2 &&
                  agg[0].timeouts == 1;
  std::ostringstream d;
  d << "3 instances (1.5 s, 2.25 s, timeout at " << kPar2Limit << " s): PAR-2 " << score << ", expected " << expected;
  return {ok ? Verdict::Pass : Verdict::Fail, d.str()};
}

// 9 -------------------------------------------------------------------------

Result determinism() {
  int differing = 0, runs = 0;
  for (const char* file : {"snow_ring.lvl", "soko_square.xsb"}) {
    for (const char* mode : {"hybrid", "collapsed"}) {
      const std::string cmd =
          kCli + " solve " + (kFixtureDir / file).string() + " --mode " + mode + " --seed 17 --emit record";
      CommandResult a = run_command(cmd), b = run_command(cmd);
      ++runs;
      if (a.status != 0 || b.status != 0) {
        ++differing;
        continue;
      }
      RunRecord ra = parse_record(a.out), rb = parse_record(b.out);
      differing += to_json_line(ra, false) != to_json_line(rb, false);
    }
  }
  return {differing == 0 ? Verdict::Pass : Verdict::Fail,
          std::to_string(runs) + " command pairs, " + std::to_string(differing) + " differing records"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Result (*run)();
  };
  const Criterion criteria[] = {
      {1, "reachability exactness", reachability_exactness},
      {2, "encoding size bounds", encoding_sizes},
      {3, "oracle optimality agreement", oracle_agreement},
      {4, "parallel step serializability", parallel_serializability},
      {5, "occupancy-gate fixtures", blocking_fixtures},
      {6, "descend multi-step drop", descend_drop},
      {7, "level asset reproduction", asset_reproduction},
      {8, "PAR-2 mechanics", par2_mechanics},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = Clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = r.verdict == Verdict::Pass ? "PASS" : r.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    failed += r.verdict == Verdict::Fail;
    std::printf("criterion %d %s: %s (%s) [%.1fs]\n", c.id, tag, c.name, r.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
