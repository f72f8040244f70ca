#pragma once

// Puzzle levels for both games and the grid graph derived from them.
//
// Snowman text format (one character per cell):
//   '#' wall   '-' floor   '.' floor with snow
//   '1'..'7'   ball stack on plain floor, read as a size bitmask:
//              1 small, 2 medium, 4 large (3 = small on medium, 7 = snowman)
//   'p' agent on floor   'P' agent on snow
//
// Sokoban uses the XSB convention:
//   '#' wall   ' ', '-', '_' floor   '.' goal   '$' box   '*' box on goal
//   '@' agent  '+' agent on goal

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "gridsat/cnf.hpp"
#include "gridsat/graph.hpp"

namespace gridsat {

enum class Game { Snowman, Sokoban };

inline const char* to_string(Game g) { return g == Game::Snowman ? "snowman" : "sokoban"; }

enum class Direction : std::uint8_t { N, S, E, W };

inline constexpr std::array<Direction, 4> kDirections{Direction::N, Direction::S, Direction::E, Direction::W};

inline constexpr int row_delta(Direction d) { return d == Direction::N ? -1 : d == Direction::S ? 1 : 0; }
inline constexpr int col_delta(Direction d) { return d == Direction::W ? -1 : d == Direction::E ? 1 : 0; }

inline constexpr char direction_letter(Direction d) {
  constexpr char letters[] = {'N', 'S', 'E', 'W'};
  return letters[static_cast<int>(d)];
}

/// lurd alphabet: u/d/r/l for N/S/E/W.
inline constexpr char lurd_letter(Direction d) {
  constexpr char letters[] = {'u', 'd', 'r', 'l'};
  return letters[static_cast<int>(d)];
}

/// Ball sizes double as stack bits.
enum class BallSize : std::uint8_t { Small = 1, Medium = 2, Large = 4 };

inline constexpr std::uint8_t bit(BallSize s) { return static_cast<std::uint8_t>(s); }
inline constexpr std::uint8_t kFullSnowman = 7;

inline constexpr BallSize grown(BallSize s) {
  return s == BallSize::Small ? BallSize::Medium : BallSize::Large;
}

struct Level {
  Game game = Game::Snowman;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> wall;
  std::vector<std::uint8_t> snow;
  std::vector<std::uint8_t> stack;  // ball bitmask; Sokoban: 1 = box
  std::vector<std::uint8_t> goal;   // Sokoban only
  int agent = -1;

  int cell(int r, int c) const { return r * cols + c; }
  int row_of(int cell) const { return cell / cols; }
  int col_of(int cell) const { return cell % cols; }
  int cells() const { return rows * cols; }
  bool is_floor(int cell) const { return cell >= 0 && cell < cells() && !wall[cell]; }

  /// Adjacent cell in direction d, or -1 outside the grid.
  int step(int cell, Direction d) const {
    int r = row_of(cell) + row_delta(d);
    int c = col_of(cell) + col_delta(d);
    if (r < 0 || c < 0 || r >= rows || c >= cols) return -1;
    return this->cell(r, c);
  }

  int ball_count() const {
    int n = 0;
    for (std::uint8_t s : stack) n += std::popcount(s);
    return n;
  }

  int snowmen() const { return game == Game::Snowman ? ball_count() / 3 : 0; }
  int floor_count() const {
    int n = 0;
    for (std::uint8_t w : wall) n += w ? 0 : 1;
    return n;
  }
};

struct ParseOptions {
  // Snowman analysis fixtures may carry an incomplete set of balls.
  bool require_complete_snowmen = true;
};

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty() && cur.back() == '\r') cur.pop_back();
  if (!cur.empty()) lines.push_back(std::move(cur));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
  return lines;
}

inline void init_grid(Level& lv, Game game, int rows, int cols) {
  lv.game = game;
  lv.rows = rows;
  lv.cols = cols;
  lv.wall.assign(rows * cols, 0);
  lv.snow.assign(rows * cols, 0);
  lv.stack.assign(rows * cols, 0);
  lv.goal.assign(rows * cols, 0);
}

}  // namespace detail

inline Level parse_snowman(std::string_view text, ParseOptions opts = {}) {
  auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty level");
  const int rows = static_cast<int>(lines.size());
  const int cols = static_cast<int>(lines[0].size());
  Level lv;
  detail::init_grid(lv, Game::Snowman, rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(lines[r].size()) != cols) {
      throw ParseError("level is not rectangular (row " + std::to_string(r) + ")");
    }
    for (int c = 0; c < cols; ++c) {
      const int cell = lv.cell(r, c);
      const char ch = lines[r][c];
      switch (ch) {
        case '#': lv.wall[cell] = 1; break;
        case '-': break;
        case '.': lv.snow[cell] = 1; break;
        case 'p':
        case 'P':
          if (lv.agent >= 0) throw ParseError("more than one agent");
          lv.agent = cell;
          lv.snow[cell] = ch == 'P';
          break;
        default:
          if (ch >= '1' && ch <= '7') {
            lv.stack[cell] = static_cast<std::uint8_t>(ch - '0');
          } else {
            throw ParseError(std::string("unknown level character '") + ch + "'");
          }
      }
      const bool border = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
      if (border && !lv.wall[cell]) throw ParseError("border cell is not a wall");
    }
  }
  if (lv.agent < 0) throw ParseError("missing agent");
  if (opts.require_complete_snowmen && lv.ball_count() % 3 != 0) {
    throw ParseError("ball count " + std::to_string(lv.ball_count()) + " is not a multiple of 3");
  }
  return lv;
}

inline Level parse_sokoban_xsb(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty level");
  const int rows = static_cast<int>(lines.size());
  int cols = 0;
  for (const auto& l : lines) cols = std::max(cols, static_cast<int>(l.size()));
  Level lv;
  detail::init_grid(lv, Game::Sokoban, rows, cols);
  int boxes = 0, goals = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int cell = lv.cell(r, c);
      const char ch = c < static_cast<int>(lines[r].size()) ? lines[r][c] : ' ';
      switch (ch) {
        case '#': lv.wall[cell] = 1; break;
        case ' ': case '-': case '_': break;
        case '.': lv.goal[cell] = 1; break;
        case '$': lv.stack[cell] = 1; break;
        case '*': lv.stack[cell] = 1; lv.goal[cell] = 1; break;
        case '@':
        case '+':
          if (lv.agent >= 0) throw ParseError("more than one agent");
          lv.agent = cell;
          lv.goal[cell] = ch == '+';
          break;
        default: throw ParseError(std::string("unknown XSB character '") + ch + "'");
      }
      boxes += lv.stack[cell];
      goals += lv.goal[cell];
    }
  }
  if (lv.agent < 0) throw ParseError("missing agent");
  if (boxes != goals) {
    throw ParseError("box count " + std::to_string(boxes) + " differs from goal count " + std::to_string(goals));
  }
  // floor connected to the outside of the grid is exterior and becomes wall
  std::vector<std::uint8_t> outside(lv.cells(), 0);
  std::deque<int> queue;
  for (int cell = 0; cell < lv.cells(); ++cell) {
    int r = lv.row_of(cell), c = lv.col_of(cell);
    bool border = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
    if (border && !lv.wall[cell]) {
      outside[cell] = 1;
      queue.push_back(cell);
    }
  }
  while (!queue.empty()) {
    int cell = queue.front();
    queue.pop_front();
    for (Direction d : kDirections) {
      int n = lv.step(cell, d);
      if (n >= 0 && !lv.wall[n] && !outside[n]) {
        outside[n] = 1;
        queue.push_back(n);
      }
    }
  }
  for (int cell = 0; cell < lv.cells(); ++cell) {
    if (!outside[cell]) continue;
    if (cell == lv.agent || lv.stack[cell] || lv.goal[cell]) throw ParseError("level is not enclosed by walls");
    lv.wall[cell] = 1;
  }
  return lv;
}

inline std::string render(const Level& lv) {
  std::string out;
  for (int r = 0; r < lv.rows; ++r) {
    for (int c = 0; c < lv.cols; ++c) {
      const int cell = lv.cell(r, c);
      char ch;
      if (lv.game == Game::Snowman) {
        if (lv.wall[cell]) ch = '#';
        else if (cell == lv.agent) ch = lv.snow[cell] ? 'P' : 'p';
        else if (lv.stack[cell]) ch = static_cast<char>('0' + lv.stack[cell]);
        else ch = lv.snow[cell] ? '.' : '-';
      } else {
        if (lv.wall[cell]) ch = '#';
        else if (cell == lv.agent) ch = lv.goal[cell] ? '+' : '@';
        else if (lv.stack[cell]) ch = lv.goal[cell] ? '*' : '$';
        else ch = lv.goal[cell] ? '.' : ' ';
      }
      out += ch;
    }
    out += '\n';
  }
  return out;
}

inline Level parse_level(std::string_view text, Game game, ParseOptions opts = {}) {
  return game == Game::Snowman ? parse_snowman(text, opts) : parse_sokoban_xsb(text);
}

/// One vertex per floor cell (row-major), edges between orthogonal floor
/// neighbours.
inline Graph grid_graph(const Level& lv) {
  GridInfo info;
  info.rows = lv.rows;
  info.cols = lv.cols;
  info.vertex_of_cell.assign(lv.cells(), -1);
  for (int cell = 0; cell < lv.cells(); ++cell) {
    if (!lv.wall[cell]) {
      info.vertex_of_cell[cell] = static_cast<int>(info.cell_of_vertex.size());
      info.cell_of_vertex.push_back(cell);
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int cell = 0; cell < lv.cells(); ++cell) {
    if (lv.wall[cell]) continue;
    for (Direction d : {Direction::S, Direction::E}) {
      int n = lv.step(cell, d);
      if (n >= 0 && !lv.wall[n]) edges.emplace_back(info.vertex_of_cell[cell], info.vertex_of_cell[n]);
    }
  }
  const int n = static_cast<int>(info.cell_of_vertex.size());
  return Graph::undirected(n, std::move(edges), std::move(info));
}

}  // namespace gridsat
