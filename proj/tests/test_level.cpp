#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace gridsat;

TEST(ParseSnowman, ThreeBalls) {
  Level lv = parse_snowman("######\n#p1..#\n#.24.#\n######\n");
  EXPECT_EQ(lv.rows, 4);
  EXPECT_EQ(lv.cols, 6);
  EXPECT_EQ(lv.ball_count(), 3);
  EXPECT_EQ(lv.snowmen(), 1);
  EXPECT_EQ(lv.agent, lv.cell(1, 1));
  EXPECT_EQ(lv.stack[lv.cell(1, 2)], bit(BallSize::Small));
  EXPECT_EQ(lv.stack[lv.cell(2, 2)], bit(BallSize::Medium));
  EXPECT_EQ(lv.stack[lv.cell(2, 3)], bit(BallSize::Large));
  EXPECT_TRUE(lv.snow[lv.cell(1, 3)]);
  EXPECT_FALSE(lv.snow[lv.cell(1, 2)]);
}

TEST(ParseSnowman, StacksAndAgentOnSnow) {
  Level lv = parse_snowman("#####\n#P3.#\n#4--#\n#####\n");
  EXPECT_TRUE(lv.snow[lv.agent]);
  EXPECT_EQ(lv.stack[lv.cell(1, 2)], 3);
  EXPECT_EQ(lv.ball_count(), 3);
}

TEST(ParseSnowman, Errors) {
  EXPECT_THROW(parse_snowman("####\n#p1#\n####\n"), ParseError);   // 1 ball
  EXPECT_THROW(parse_snowman("####\n#p#\n####\n"), ParseError);    // ragged
  EXPECT_THROW(parse_snowman("####\n#px#\n####\n"), ParseError);   // unknown
  EXPECT_THROW(parse_snowman("####\n#--#\n####\n"), ParseError);   // no agent
  EXPECT_THROW(parse_snowman("####\n#pp#\n####\n"), ParseError);   // two agents
  EXPECT_THROW(parse_snowman("#-##\n#p-#\n####\n"), ParseError);   // open border
  EXPECT_THROW(parse_snowman(""), ParseError);
}

TEST(ParseSnowman, IncompleteAllowedOnRequest) {
  Level lv = parse_snowman("####\n#p1#\n####\n", ParseOptions{false});
  EXPECT_EQ(lv.ball_count(), 1);
  EXPECT_EQ(lv.snowmen(), 0);
}

TEST(ParseSnowman, CrlfTolerated) {
  Level lv = parse_snowman("######\r\n#p124#\r\n######\r\n");
  EXPECT_EQ(lv.cols, 6);
}

TEST(ParseSokoban, Basic) {
  Level lv = parse_sokoban_xsb("#####\n#@$.#\n#####\n");
  EXPECT_EQ(lv.game, Game::Sokoban);
  EXPECT_EQ(lv.agent, lv.cell(1, 1));
  EXPECT_EQ(lv.stack[lv.cell(1, 2)], 1);
  EXPECT_TRUE(lv.goal[lv.cell(1, 3)]);
}

TEST(ParseSokoban, BoxOnGoalCountsTwice) {
  EXPECT_THROW(parse_sokoban_xsb("#####\n#@*.#\n#####\n"), ParseError);  // 1 box, 2 goals
  Level ok = parse_sokoban_xsb("#####\n#@* #\n#####\n");
  EXPECT_TRUE(ok.goal[ok.cell(1, 2)]);
  EXPECT_EQ(ok.stack[ok.cell(1, 2)], 1);
}

TEST(ParseSokoban, Errors) {
  EXPECT_THROW(parse_sokoban_xsb("#####\n#@x.#\n#####\n"), ParseError);
  EXPECT_THROW(parse_sokoban_xsb("#####\n# $.#\n#####\n"), ParseError);
  EXPECT_THROW(parse_sokoban_xsb("#####\n#@$.\n#####\n"), ParseError);  // goal outside
}

TEST(ParseSokoban, RaggedRowsArePadded) {
  Level lv = parse_sokoban_xsb("  ####\n###@ #\n#.$  #\n######\n");
  EXPECT_EQ(lv.cols, 6);
  EXPECT_TRUE(lv.wall[lv.cell(0, 0)]);  // exterior
}

TEST(Render, RoundTrips) {
  const char* snow = "######\n#p1..#\n#.24.#\n######\n";
  EXPECT_EQ(render(parse_snowman(snow)), snow);
  const char* soko = "######\n#@$ .#\n#*   #\n######\n";
  EXPECT_EQ(render(parse_sokoban_xsb(soko)), soko);
}

TEST(GridGraph, Corridor) {
  Level lv = parse_sokoban_xsb("#####\n#@$.#\n#####\n");
  Graph g = grid_graph(lv);
  EXPECT_EQ(g.size(), 3);
  EXPECT_EQ(g.edge_count(), 2u);
  ASSERT_TRUE(g.grid());
  EXPECT_EQ(g.grid()->cell_of_vertex[0], lv.cell(1, 1));
}

TEST(GridGraph, RandomLevelsHaveGridDegrees) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomLevelSpec spec;
    spec.rows = 5;
    spec.cols = 5;
    Level lv;
    try {
      lv = gen_random_level(seed, spec);
    } catch (const ContractError&) {
      continue;
    }
    Graph g = grid_graph(lv);
    EXPECT_EQ(g.size(), lv.floor_count());
    EXPECT_LE(g.edge_count(), 2u * g.size());
    for (int v = 0; v < g.size(); ++v) EXPECT_LE(g.neighbours(v).size(), 4u);
  }
}
