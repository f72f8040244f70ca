#pragma once

// Random levels for fuzzing and frozen fixtures: a level file plus a JSON
// sidecar holding the oracle optima.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gridsat/game.hpp"
#include "gridsat/level.hpp"

namespace gridsat {

struct RandomLevelSpec {
  int rows = 5;  // including the wall border
  int cols = 5;
  double density = 0.2;  // interior wall probability
  Game game = Game::Snowman;
  double snow = 0.3;     // Snowman: snow probability per free cell
  int boxes = 1;         // Sokoban
};

/// Deterministic for a given seed. Throws ContractError when the level
/// cannot hold the agent and its objects.
inline Level gen_random_level(std::uint64_t seed, const RandomLevelSpec& spec) {
  if (spec.rows < 3 || spec.cols < 3 || spec.rows > 6 || spec.cols > 6) {
    throw ContractError("random levels are between 3x3 and 6x6");
  }
  std::mt19937_64 rng(seed);
  auto chance = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };
  Level lv;
  detail::init_grid(lv, spec.game, spec.rows, spec.cols);
  std::vector<int> floor;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int cell = lv.cell(r, c);
      const bool border = r == 0 || c == 0 || r == spec.rows - 1 || c == spec.cols - 1;
      if (border || chance(spec.density)) {
        lv.wall[cell] = 1;
      } else {
        floor.push_back(cell);
      }
    }
  }
  const int objects = spec.game == Game::Snowman ? 3 : spec.boxes;
  if (static_cast<int>(floor.size()) < objects + 1) throw ContractError("not enough floor for the level");
  std::shuffle(floor.begin(), floor.end(), rng);
  lv.agent = floor[0];
  if (spec.game == Game::Snowman) {
    lv.stack[floor[1]] = bit(BallSize::Small);
    lv.stack[floor[2]] = bit(BallSize::Medium);
    lv.stack[floor[3]] = bit(BallSize::Large);
    for (std::size_t i = 4; i < floor.size(); ++i) lv.snow[floor[i]] = chance(spec.snow);
  } else {
    for (int b = 0; b < spec.boxes; ++b) lv.stack[floor[1 + b]] = 1;
    // goals anywhere except the agent cell
    std::vector<int> spots(floor.begin() + 1, floor.end());
    std::shuffle(spots.begin(), spots.end(), rng);
    for (int b = 0; b < spec.boxes; ++b) lv.goal[spots[b]] = 1;
  }
  return lv;
}

// ---------------------------------------------------------------------------
// Frozen fixtures
// ---------------------------------------------------------------------------

struct Fixture {
  std::string name;
  Level level;
  std::string text;  // level file contents
  int moves_optimum = -1;
  int object_optimum = -1;
  std::size_t states = 0;
  bool complete = true;  // parsed with require_complete_snowmen
};

inline Game game_from_path(const std::filesystem::path& p) {
  const auto ext = p.extension();
  return ext == ".xsb" || ext == ".sok" ? Game::Sokoban : Game::Snowman;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs both oracles and writes `<dir>/<name>.{lvl,xsb}` plus
/// `<dir>/<name>.json`. Fixtures whose oracle exceeds the cap are rejected.
inline Fixture freeze_fixture(const std::string& text, Game game, const std::string& name,
                              const std::filesystem::path& dir, ParseOptions opts = {},
                              std::size_t cap = 1'000'000) {
  Fixture fx{name, parse_level(text, game, opts), text, -1, -1, 0, opts.require_complete_snowmen};
  OracleResult moves = oracle_optimal(fx.level, Metric::Moves, cap);
  OracleResult objects = oracle_optimal(fx.level, Metric::ObjectActions, cap);
  if (moves.status == OracleResult::Status::CapExceeded || objects.status == OracleResult::Status::CapExceeded) {
    throw ContractError("oracle exceeded the state cap for fixture " + name);
  }
  fx.moves_optimum = moves.optimum;
  fx.object_optimum = objects.optimum;
  fx.states = moves.states;
  std::filesystem::create_directories(dir);
  const char* ext = game == Game::Sokoban ? ".xsb" : ".lvl";
  std::ofstream(dir / (name + ext), std::ios::binary) << text;
  nlohmann::ordered_json meta;
  meta["name"] = name;
  meta["game"] = to_string(game);
  meta["moves_optimum"] = fx.moves_optimum;
  meta["object_actions_optimum"] = fx.object_optimum;
  meta["states"] = fx.states;
  meta["complete_snowmen"] = fx.complete;
  std::ofstream(dir / (name + ".json")) << meta.dump(2) << "\n";
  return fx;
}

/// -1 in the sidecar marks an unsolvable level.
inline Fixture load_fixture(const std::filesystem::path& level_path) {
  auto meta_path = level_path;
  meta_path.replace_extension(".json");
  auto meta = nlohmann::json::parse(read_file(meta_path));
  Fixture fx;
  fx.name = meta.at("name").get<std::string>();
  fx.text = read_file(level_path);
  fx.complete = meta.value("complete_snowmen", true);
  fx.level = parse_level(fx.text, game_from_path(level_path), ParseOptions{fx.complete});
  fx.moves_optimum = meta.at("moves_optimum").get<int>();
  fx.object_optimum = meta.at("object_actions_optimum").get<int>();
  fx.states = meta.at("states").get<std::size_t>();
  return fx;
}

}  // namespace gridsat
