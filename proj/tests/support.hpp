#pragma once

#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gridsat/gridsat.hpp"

namespace gridsat::testing {

inline const std::filesystem::path kFixtureDir = GRIDSAT_FIXTURE_DIR;
inline const std::string kCli = GRIDSAT_CLI;

/// Fixtures with oracle optima used for the agreement checks.
inline std::vector<std::filesystem::path> oracle_fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& p : level_files(kFixtureDir)) {
    if (p.stem().string().rfind("blocking_", 0) == 0) continue;
    out.push_back(p);
  }
  return out;
}

inline Fixture fixture(const std::string& name) {
  for (const char* ext : {".lvl", ".xsb"}) {
    auto p = kFixtureDir / (name + ext);
    if (std::filesystem::exists(p)) return load_fixture(p);
  }
  throw std::runtime_error("no fixture " + name);
}

/// Enumerates every assignment of the first `n` variables of `f` and calls
/// `visit` with each one that extends to a model. Only for tiny formulas.
inline std::size_t count_projected_models(const Formula& f, int n,
                                          const std::function<void(const std::vector<bool>&)>& visit = {}) {
  std::size_t count = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Formula g = f;
    std::vector<bool> assignment(n + 1, false);
    for (int v = 1; v <= n; ++v) {
      assignment[v] = mask & (1u << (v - 1));
      g.add_clause({Lit(Var{v}, assignment[v])});
    }
    if (solve(g).sat()) {
      ++count;
      if (visit) visit(assignment);
    }
  }
  return count;
}

struct CommandResult {
  int status = -1;
  std::string out;
};

inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

/// Replays every combination of within-step orderings of `plan`. Returns
/// the number of orderings tried, or nullopt at the first one that fails.
inline std::optional<std::size_t> every_ordering_serializes(const Level& lv, Plan plan) {
  auto less = [](const ObjectAction& x, const ObjectAction& y) {
    return std::pair(x.cell, static_cast<int>(x.dir)) < std::pair(y.cell, static_cast<int>(y.dir));
  };
  for (PlanStep& st : plan.steps) std::sort(st.actions.begin(), st.actions.end(), less);
  std::size_t tried = 0;
  bool failed = false;
  std::function<void(std::size_t)> each = [&](std::size_t i) {
    if (failed) return;
    if (i == plan.steps.size()) {
      ++tried;
      try {
        serialize(lv, plan, true);
      } catch (const SerializeError&) {
        failed = true;
      }
      return;
    }
    auto& acts = plan.steps[i].actions;
    do {
      each(i + 1);
    } while (!failed && std::next_permutation(acts.begin(), acts.end(), less));
  };
  each(0);
  if (failed) return std::nullopt;
  return tried;
}

/// Random grid with each cell blocked with probability `blocked`.
struct RandomGrid {
  Graph graph;
  std::vector<bool> free;
};

inline RandomGrid random_grid(std::mt19937_64& rng, int rows, int cols, double blocked) {
  GridInfo info;
  info.rows = rows;
  info.cols = cols;
  info.vertex_of_cell.resize(rows * cols);
  for (int c = 0; c < rows * cols; ++c) {
    info.vertex_of_cell[c] = c;
    info.cell_of_vertex.push_back(c);
  }
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) edges.emplace_back(r * cols + c, (r + 1) * cols + c);
    }
  }
  std::bernoulli_distribution coin(blocked);
  std::vector<bool> free(rows * cols);
  for (int v = 0; v < rows * cols; ++v) free[v] = !coin(rng);
  return {Graph::undirected(rows * cols, std::move(edges), std::move(info)), free};
}

inline Gate gate_of(const std::vector<bool>& free) {
  Gate g;
  for (bool b : free) g.free.push_back(Term::constant(b));
  return g;
}

}  // namespace gridsat::testing
