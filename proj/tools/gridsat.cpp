// gridsat command line: solve, bench, encode, validate, plus the fixture and
// solver utilities used by the test suite.
//
// Exit codes: 0 optimal / success, 2 bounded or unknown, 1 error.
// Environment (overridden by flags): GRIDSAT_SOLVER_CMD, GRIDSAT_TIMEOUT,
// GRIDSAT_SEED.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "gridsat/gridsat.hpp"

using namespace gridsat;

namespace {

struct Common {
  std::string game;
  double timeout = 0;
  std::uint64_t seed = 0;
  std::string solver_cmd;
};

void apply_env(Common& c, const CLI::App& app) {
  if (app.count("--timeout") == 0) {
    if (auto v = env_value("GRIDSAT_TIMEOUT")) c.timeout = std::stod(*v);
  }
  if (app.count("--seed") == 0) {
    if (auto v = env_value("GRIDSAT_SEED")) c.seed = std::stoull(*v);
  }
  if (app.count("--solver-cmd") == 0) {
    if (auto v = env_value("GRIDSAT_SOLVER_CMD")) c.solver_cmd = *v;
  }
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--game", c.game, "snowman or sokoban (default: from the file extension)")
      ->check(CLI::IsMember({"snowman", "sokoban"}));
  app->add_option("--timeout", c.timeout, "seconds per instance, 0 = unlimited")->check(CLI::NonNegativeNumber);
  app->add_option("--seed", c.seed, "solver seed");
  app->add_option("--solver-cmd", c.solver_cmd, "external solver template with {input}, {output}, {seed}");
}

Game resolve_game(const Common& c, const std::filesystem::path& p) {
  if (c.game.empty()) return game_from_path(p);
  return c.game == "sokoban" ? Game::Sokoban : Game::Snowman;
}

Level load_level(const std::filesystem::path& p, Game game, bool incomplete = false) {
  return parse_level(read_file(p), game, ParseOptions{!incomplete});
}

int exit_code(BoundStatus s) { return s == BoundStatus::Optimal ? 0 : 2; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAT planner for Snowman and Sokoban"};
  app.require_subcommand(1);

  // solve
  Common solve_c;
  std::string solve_path, solve_mode = "hybrid", solve_reach, emit = "both";
  int horizon_cap = 64;
  auto* solve = app.add_subcommand("solve", "solve one level");
  solve->add_option("level", solve_path)->required()->check(CLI::ExistingFile);
  add_common(solve, solve_c);
  solve->add_option("--mode", solve_mode)->check(CLI::IsMember({"full", "collapsed", "hybrid"}));
  solve->add_option("--reach", solve_reach)->check(CLI::IsMember({"path", "dag", "tree"}));
  solve->add_option("--emit", emit)->check(CLI::IsMember({"lurd", "record", "both"}));
  solve->add_option("--horizon-cap", horizon_cap)->check(CLI::PositiveNumber);

  // bench
  Common bench_c;
  std::string bench_dir, bench_mode = "collapsed";
  std::vector<std::string> bench_reach{"path", "dag", "tree"};
  unsigned workers = 1;
  auto* bench = app.add_subcommand("bench", "run a directory of levels and report PAR-2 per encoding");
  bench->add_option("dir", bench_dir)->required()->check(CLI::ExistingDirectory);
  add_common(bench, bench_c);
  bench->add_option("--mode", bench_mode)->check(CLI::IsMember({"full", "collapsed", "hybrid"}));
  bench->add_option("--reach", bench_reach)->check(CLI::IsMember({"path", "dag", "tree"}));
  bench->add_option("--workers", workers)->check(CLI::PositiveNumber);
  bench->add_option("--horizon-cap", horizon_cap)->check(CLI::PositiveNumber);

  // encode
  Common enc_c;
  std::string enc_path, enc_mode = "collapsed", enc_reach = "path", enc_out, enc_map;
  int enc_horizon = 0;
  bool enc_no_inv = false;
  auto* enc = app.add_subcommand("encode", "write the DIMACS formula for one horizon");
  enc->add_option("level", enc_path)->required()->check(CLI::ExistingFile);
  enc->add_option("--game", enc_c.game)->check(CLI::IsMember({"snowman", "sokoban"}));
  enc->add_option("--mode", enc_mode)->check(CLI::IsMember({"full", "collapsed", "parallel", "descend"}));
  enc->add_option("--reach", enc_reach)->check(CLI::IsMember({"path", "dag", "tree"}));
  enc->add_option("--horizon,-T", enc_horizon)->required()->check(CLI::NonNegativeNumber);
  enc->add_option("-o,--output", enc_out, "DIMACS file (default: stdout)");
  enc->add_option("--names", enc_map, "write 'index name' lines for every variable");
  enc->add_flag("--no-invariants", enc_no_inv);

  // validate
  Common val_c;
  std::string val_path, val_lurd;
  auto* val = app.add_subcommand("validate", "replay a LURD string");
  val->add_option("level", val_path)->required()->check(CLI::ExistingFile);
  val->add_option("lurd", val_lurd)->required();
  val->add_option("--game", val_c.game)->check(CLI::IsMember({"snowman", "sokoban"}));

  // oracle
  Common or_c;
  std::string or_path;
  bool or_incomplete = false;
  std::size_t or_cap = 2'000'000;
  auto* orc = app.add_subcommand("oracle", "brute-force optimal move and object-action counts");
  orc->add_option("level", or_path)->required()->check(CLI::ExistingFile);
  orc->add_option("--game", or_c.game)->check(CLI::IsMember({"snowman", "sokoban"}));
  orc->add_option("--cap", or_cap);
  orc->add_flag("--incomplete", or_incomplete, "allow a ball count that is not a multiple of 3");

  // freeze
  Common fr_c;
  std::string fr_path, fr_name, fr_dir = ".";
  bool fr_incomplete = false;
  auto* fr = app.add_subcommand("freeze", "store a level with its oracle optima as a fixture");
  fr->add_option("level", fr_path)->required()->check(CLI::ExistingFile);
  fr->add_option("--name", fr_name)->required();
  fr->add_option("--out-dir", fr_dir);
  fr->add_option("--game", fr_c.game)->check(CLI::IsMember({"snowman", "sokoban"}));
  fr->add_flag("--incomplete", fr_incomplete);

  // sat
  std::string sat_path;
  double sat_timeout = 0;
  std::uint64_t sat_seed = 0;
  auto* sat = app.add_subcommand("sat", "solve a DIMACS file with the embedded solver");
  sat->add_option("cnf", sat_path)->required()->check(CLI::ExistingFile);
  sat->add_option("--timeout", sat_timeout);
  sat->add_option("--seed", sat_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      apply_env(solve_c, *solve);
      SolveRequest req;
      req.instance = std::filesystem::path(solve_path).filename().string();
      req.game = resolve_game(solve_c, solve_path);
      req.mode = solve_mode;
      if (!solve_reach.empty()) req.reach = reach_from(solve_reach);
      req.timeout = solve_c.timeout;
      req.seed = solve_c.seed;
      req.solver_cmd = solve_c.solver_cmd;
      req.horizon_cap = horizon_cap;
      SolveReport rep = run_solve(load_level(solve_path, req.game), req);
      if (emit != "record") std::cout << rep.record.lurd.value_or("") << "\n";
      if (emit != "lurd") std::cout << to_json_line(rep.record) << "\n";
      return exit_code(rep.record.status);
    }
    if (*bench) {
      apply_env(bench_c, *bench);
      auto files = level_files(bench_dir);
      if (files.empty()) std::cerr << "warning: no level files in " << bench_dir << "\n";
      std::mutex out_mu;
      BenchRunner runner = [&](const std::filesystem::path& p, const std::string& reach) {
        SolveRequest req;
        req.instance = p.filename().string();
        req.game = resolve_game(bench_c, p);
        req.mode = bench_mode;
        req.reach = reach_from(reach);
        req.timeout = bench_c.timeout;
        req.seed = bench_c.seed;
        req.solver_cmd = bench_c.solver_cmd;
        req.horizon_cap = horizon_cap;
        SolveReport rep = run_solve(load_level(p, req.game), req);
        {
          std::lock_guard lock(out_mu);
          std::cout << to_json_line(rep.record) << "\n";
        }
        return BenchRun{req.instance, reach, rep.record.status == BoundStatus::Optimal, rep.record.elapsed, {}};
      };
      auto runs = run_bench(files, bench_reach, runner, workers);
      const double limit = bench_c.timeout;
      for (const BenchRun& r : runs) {
        if (r.error) std::cerr << "error: " << r.instance << " (" << r.encoding << "): " << *r.error << "\n";
      }
      for (const EncodingScore& s : aggregate(runs, limit)) {
        nlohmann::ordered_json j;
        j["encoding"] = s.encoding;
        j["par2"] = s.par2;
        j["solved"] = s.solved;
        j["timeouts"] = s.timeouts;
        j["errors"] = s.errors;
        std::cout << j.dump() << "\n";
      }
      if (files.empty()) std::cout << R"({"encoding":null,"par2":0})" << "\n";
      return 0;
    }
    if (*enc) {
      const Game game = resolve_game(enc_c, enc_path);
      EncodingConfig cfg;
      cfg.mode = enc_mode == "full"       ? Mode::Full
                 : enc_mode == "parallel" ? Mode::Parallel
                 : enc_mode == "descend"  ? Mode::Descend
                                          : Mode::Collapsed;
      cfg.reach = reach_from(enc_reach);
      cfg.horizon = enc_horizon;
      cfg.invariants = !enc_no_inv;
      Encoding e = encode(load_level(enc_path, game), cfg);
      const std::string text = to_dimacs(e.formula);
      if (enc_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(enc_out) << text;
      }
      if (!enc_map.empty()) {
        std::ofstream names(enc_map);
        for (int v = 1; v <= e.formula.num_vars(); ++v) names << v << " " << e.formula.name_of(Var{v}) << "\n";
      }
      std::cerr << "vars " << e.formula.num_vars() << " clauses " << e.formula.num_clauses() << "\n";
      return 0;
    }
    if (*val) {
      const Level lv = load_level(val_path, resolve_game(val_c, val_path));
      Validation v = validate(lv, val_lurd);
      nlohmann::ordered_json j;
      j["goal"] = v.goal;
      j["moves"] = v.moves;
      j["object_actions"] = v.object_actions;
      j["case_ok"] = v.case_ok;
      j["rejected_at"] = v.rejected_at ? nlohmann::ordered_json(*v.rejected_at) : nlohmann::ordered_json(nullptr);
      j["case_mismatch_at"] =
          v.case_mismatch_at ? nlohmann::ordered_json(*v.case_mismatch_at) : nlohmann::ordered_json(nullptr);
      std::cout << j.dump() << "\n";
      if (v.rejected_at) std::cerr << "move " << *v.rejected_at << " is rejected\n";
      return v.ok() ? 0 : 1;
    }
    if (*orc) {
      const Level lv = load_level(or_path, resolve_game(or_c, or_path), or_incomplete);
      nlohmann::ordered_json j;
      for (Metric m : {Metric::Moves, Metric::ObjectActions}) {
        OracleResult r = oracle_optimal(lv, m, or_cap);
        const char* key = m == Metric::Moves ? "moves" : "object_actions";
        j[key] = r.status == OracleResult::Status::Optimal       ? nlohmann::ordered_json(r.optimum)
                 : r.status == OracleResult::Status::Unsolvable ? nlohmann::ordered_json("unsolvable")
                                                                 : nlohmann::ordered_json("cap");
        j[std::string(key) + "_states"] = r.states;
      }
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (*fr) {
      const Game game = resolve_game(fr_c, fr_path);
      Fixture fx = freeze_fixture(read_file(fr_path), game, fr_name, fr_dir, ParseOptions{!fr_incomplete});
      std::cout << fx.name << " moves " << fx.moves_optimum << " object_actions " << fx.object_optimum << " states "
                << fx.states << "\n";
      return 0;
    }
    if (*sat) {
      std::ifstream in(sat_path);
      Formula f = parse_dimacs(in);
      SolveOutcome out = gridsat::solve(f, sat_timeout, sat_seed);
      if (out.status == SolveStatus::Sat) {
        std::cout << "s SATISFIABLE\nv";
        for (int v = 1; v <= f.num_vars(); ++v) std::cout << " " << (out.model[v] ? v : -v);
        std::cout << " 0\n";
        return 10;
      }
      if (out.status == SolveStatus::Unsat) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
      }
      std::cout << "s UNKNOWN\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
