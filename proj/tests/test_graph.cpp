#include <gtest/gtest.h>

#include "support.hpp"

using namespace gridsat;

TEST(Graph, UndirectedNeighbours) {
  Graph g = Graph::undirected(4, {{0, 1}, {1, 2}, {1, 0}});
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.neighbours(1).size(), 2u);
  EXPECT_FALSE(g.is_directed());
}

TEST(Graph, DirectedAdjacency) {
  Graph g = Graph::directed(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(g.successors(0), std::vector<int>{1});
  EXPECT_EQ(g.predecessors(2), std::vector<int>{1});
  EXPECT_TRUE(g.predecessors(0).empty());
}

TEST(Graph, InvalidEdges) {
  EXPECT_THROW(Graph::undirected(2, {{0, 0}}), ContractError);
  EXPECT_THROW(Graph::directed(2, {{0, 2}}), ContractError);
}

TEST(Graph, Symmetrized) {
  Graph g = Graph::undirected(3, {{0, 1}, {1, 2}}).symmetrized();
  EXPECT_TRUE(g.is_directed());
  EXPECT_EQ(g.edge_count(), 4u);
}

TEST(Graph, Components) {
  Graph g = Graph::undirected(5, {{0, 1}, {3, 4}});
  auto c = g.components();
  EXPECT_EQ(c[0], c[1]);
  EXPECT_EQ(c[3], c[4]);
  EXPECT_NE(c[0], c[2]);
  EXPECT_NE(c[0], c[3]);
}

TEST(Bfs, RespectsGate) {
  Graph g = Graph::undirected(4, {{0, 1}, {1, 2}, {2, 3}});
  auto r = bfs_reachable(g, 0, {true, true, false, true});
  EXPECT_EQ(r, (std::vector<bool>{true, true, false, false}));
  EXPECT_THROW(bfs_reachable(g, 2, {true, true, false, true}), ContractError);
  EXPECT_EQ(bfs_reachable(g, 3), (std::vector<bool>{true, true, true, true}));
}

TEST(Bfs, Directed) {
  Graph g = Graph::directed(3, {{0, 1}, {2, 1}});
  EXPECT_EQ(bfs_reachable(g, 0), (std::vector<bool>{true, true, false}));
}
