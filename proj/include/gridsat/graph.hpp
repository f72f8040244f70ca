#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "gridsat/cnf.hpp"

namespace gridsat {

/// Row/column metadata for graphs built from grids.
struct GridInfo {
  int rows = 0;
  int cols = 0;
  std::vector<int> vertex_of_cell;  // -1 where the cell is not a vertex
  std::vector<int> cell_of_vertex;
};

class Graph {
 public:
  Graph() = default;

  static Graph undirected(int n, std::vector<std::pair<int, int>> edges,
                          std::optional<GridInfo> grid = std::nullopt) {
    return Graph(n, std::move(edges), false, std::move(grid));
  }

  static Graph directed(int n, std::vector<std::pair<int, int>> edges) {
    return Graph(n, std::move(edges), true, std::nullopt);
  }

  int size() const { return n_; }
  bool is_directed() const { return directed_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Outgoing neighbours (all neighbours when undirected).
  const std::vector<int>& successors(int v) const { return out_.at(v); }
  const std::vector<int>& predecessors(int v) const { return in_.at(v); }
  const std::vector<int>& neighbours(int v) const { return out_.at(v); }

  const std::optional<GridInfo>& grid() const { return grid_; }

  /// Directed view with both orientations of every undirected edge.
  Graph symmetrized() const {
    if (directed_) return *this;
    std::vector<std::pair<int, int>> arcs;
    arcs.reserve(2 * edges_.size());
    for (auto [a, b] : edges_) {
      arcs.emplace_back(a, b);
      arcs.emplace_back(b, a);
    }
    Graph g = directed(n_, std::move(arcs));
    g.grid_ = grid_;
    return g;
  }

  /// Weakly connected component index per vertex, ignoring any gate.
  std::vector<int> components() const {
    std::vector<int> comp(n_, -1);
    int next = 0;
    for (int s = 0; s < n_; ++s) {
      if (comp[s] >= 0) continue;
      std::deque<int> queue{s};
      comp[s] = next;
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (const auto* list : {&out_[v], &in_[v]}) {
          for (int u : *list) {
            if (comp[u] < 0) {
              comp[u] = next;
              queue.push_back(u);
            }
          }
        }
      }
      ++next;
    }
    return comp;
  }

 private:
  Graph(int n, std::vector<std::pair<int, int>> edges, bool directed, std::optional<GridInfo> grid)
      : n_(n), directed_(directed), grid_(std::move(grid)), out_(n), in_(n) {
    if (n < 0) throw ContractError("negative vertex count");
    for (auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n) throw ContractError("edge endpoint out of range");
      if (a == b) throw ContractError("self-loop");
      if (!directed && a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (auto [a, b] : edges_) {
      out_[a].push_back(b);
      in_[b].push_back(a);
      if (!directed_) {
        out_[b].push_back(a);
        in_[a].push_back(b);
      }
    }
    if (grid_) {
      for (int v = 0; v < n_; ++v) {
        if (out_[v].size() > 4) throw ContractError("grid vertex with more than 4 neighbours");
      }
    }
  }

  int n_ = 0;
  bool directed_ = false;
  std::optional<GridInfo> grid_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// Vertices reachable from `source` through vertices marked free.
inline std::vector<bool> bfs_reachable(const Graph& g, int source, const std::vector<bool>& free) {
  if (source < 0 || source >= g.size()) throw ContractError("source out of range");
  if (!free.at(source)) throw ContractError("source is not free");
  std::vector<bool> seen(g.size(), false);
  std::deque<int> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : g.successors(v)) {
      if (!seen[u] && free[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

inline std::vector<bool> bfs_reachable(const Graph& g, int source) {
  return bfs_reachable(g, source, std::vector<bool>(g.size(), true));
}

}  // namespace gridsat
