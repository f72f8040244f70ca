#include <gtest/gtest.h>

#include "support.hpp"

using namespace gridsat;
using namespace gridsat::testing;

namespace {

std::vector<Direction> dirs(std::string_view lurd) { return directions_of(parse_lurd(lurd)); }

}  // namespace

TEST(Decode, FullModelGivesMoves) {
  Level lv = parse_sokoban_xsb("######\n#@ $.#\n######\n");
  Encoding enc = encode_full(lv, 2);
  SolveOutcome out = solve(enc.formula);
  ASSERT_TRUE(out.sat());
  Plan p = decode(enc, lv, out.model);
  EXPECT_EQ(p.form, Plan::Form::Moves);
  EXPECT_EQ(p.moves, (std::vector<Direction>{Direction::E, Direction::E}));
}

TEST(Decode, CollapsedModelGivesOneActionPerStep) {
  Level lv = parse_sokoban_xsb("######\n#@ $.#\n######\n");
  Encoding enc = encode_collapsed(lv, 1, ReachKind::Tree);
  SolveOutcome out = solve(enc.formula);
  ASSERT_TRUE(out.sat());
  Plan p = decode(enc, lv, out.model);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0].actions, (std::vector<ObjectAction>{{lv.cell(1, 3), Direction::E}}));
  EXPECT_EQ(p.object_actions(), 1u);
}

TEST(Decode, DescendSkipsNoops) {
  Level lv = parse_sokoban_xsb("######\n#@ $.#\n######\n");
  Encoding enc = encode_descend(lv, 3, ReachKind::Path);
  SolveOutcome out = solve(enc.formula);
  ASSERT_TRUE(out.sat());
  Plan p = decode(enc, lv, out.model);
  EXPECT_GE(p.steps.size(), 1u);
  EXPECT_TRUE(run_plan(lv, serialize(lv, p)).goal);
}

TEST(Decode, ShortModelIsRejected) {
  Level lv = parse_sokoban_xsb("#####\n#@$.#\n#####\n");
  Encoding enc = encode_full(lv, 1);
  EXPECT_THROW(decode(enc, lv, std::vector<bool>(2, false)), DecodeError);
}

TEST(Decode, ContradictoryModelIsRejected) {
  Level lv = parse_sokoban_xsb("#####\n#@$.#\n#####\n");
  Encoding enc = encode_full(lv, 1);
  std::vector<bool> model(enc.formula.num_vars() + 1, false);
  EXPECT_THROW(decode(enc, lv, model), DecodeError);  // no direction
  model[enc.formula.at(dir_name(Direction::N, 0)).index] = true;
  model[enc.formula.at(dir_name(Direction::E, 0)).index] = true;
  EXPECT_THROW(decode(enc, lv, model), DecodeError);  // two directions
}

TEST(Order, RowMajorThenDirection) {
  Level lv = parse_sokoban_xsb("#######\n#@ $ .#\n#  $ .#\n#######\n");
  std::vector<ObjectAction> acts{{lv.cell(2, 3), Direction::E}, {lv.cell(1, 3), Direction::W},
                                 {lv.cell(1, 3), Direction::E}};
  order_actions(lv, acts);
  // acting cells: (1,4) for W, (1,2) for E on row 1, (2,2) for row 2
  EXPECT_EQ(acts[0], (ObjectAction{lv.cell(1, 3), Direction::E}));
  EXPECT_EQ(acts[1], (ObjectAction{lv.cell(1, 3), Direction::W}));
  EXPECT_EQ(acts[2], (ObjectAction{lv.cell(2, 3), Direction::E}));
}

TEST(Serialize, InsertsWalks) {
  Level lv = parse_sokoban_xsb("#######\n#@  $.#\n#######\n");
  Plan p;
  p.steps.push_back({{{lv.cell(1, 4), Direction::E}}, std::nullopt});
  EXPECT_EQ(to_lurd(lv, serialize(lv, p)), "rrR");
}

TEST(Serialize, JumpThenAction) {
  Level lv = parse_sokoban_xsb("#######\n#@  $.#\n#######\n");
  Plan p;
  p.steps.push_back({{}, lv.cell(1, 3)});
  p.steps.push_back({{{lv.cell(1, 4), Direction::E}}, std::nullopt});
  EXPECT_EQ(to_lurd(lv, serialize(lv, p)), "rrR");
}

TEST(Serialize, ImpossibleWalkThrows) {
  Level lv = parse_sokoban_xsb("#######\n#@ $ .#\n#######\n");
  Plan p;
  p.steps.push_back({{{lv.cell(1, 3), Direction::W}}, std::nullopt});  // acting cell behind the box
  EXPECT_THROW(serialize(lv, p), SerializeError);
}

TEST(Serialize, InapplicableActionThrows) {
  Level lv = parse_sokoban_xsb("#######\n#@ $$.#\n#.    #\n#######\n");
  Plan p;
  p.steps.push_back({{{lv.cell(1, 3), Direction::E}}, std::nullopt});
  EXPECT_THROW(serialize(lv, p), SerializeError);
}

TEST(Lurd, CaseMarksObjectActions) {
  Level lv = parse_sokoban_xsb("#######\n#@  $.#\n#######\n");
  EXPECT_EQ(to_lurd(lv, dirs("rrr")), "rrR");
  EXPECT_THROW(to_lurd(lv, dirs("u")), ReplayError);
  try {
    to_lurd(lv, dirs("rru"));
  } catch (const ReplayError& e) {
    EXPECT_EQ(e.index, 2u);
  }
}

TEST(Lurd, ParseErrors) {
  EXPECT_THROW(parse_lurd("rx"), ParseError);
  auto m = parse_lurd("lU r\nD");
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m[1].dir, Direction::N);
  EXPECT_TRUE(m[1].object);
  EXPECT_FALSE(m[2].object);
}

TEST(Validate, GoodWrongCaseAndTruncated) {
  Level lv = parse_sokoban_xsb("#######\n#@  $.#\n#######\n");
  Validation good = validate(lv, "rrR");
  EXPECT_TRUE(good.ok());
  EXPECT_EQ(good.moves, 3u);
  EXPECT_EQ(good.object_actions, 1u);
  Validation wrong = validate(lv, "rRR");
  EXPECT_FALSE(wrong.ok());
  EXPECT_TRUE(wrong.goal);
  EXPECT_EQ(wrong.case_mismatch_at, 1u);
  Validation truncated = validate(lv, "rr");
  EXPECT_FALSE(truncated.ok());
  EXPECT_FALSE(truncated.goal);
  Validation rejected = validate(lv, "rrRR");
  EXPECT_EQ(rejected.rejected_at, 3u);
  EXPECT_FALSE(rejected.ok());
}

TEST(Validate, SnowmanPopIsUppercase) {
  Level lv = parse_snowman("#####\n#p6-#\n#-1-#\n#####\n");
  Validation v = validate(lv, "R");
  EXPECT_EQ(v.object_actions, 1u);
  EXPECT_TRUE(v.case_ok);
}

TEST(Record, RoundTrip) {
  RunRecord r;
  r.instance = "tiny1.lvl";
  r.game = "snowman";
  r.mode = "hybrid";
  r.reach = "tree+path";
  r.lb = 4;
  r.ub = 4;
  r.status = BoundStatus::Optimal;
  r.horizons = {{"ascend", 3, SolveStatus::Sat, 0.25}, {"descend", 3, SolveStatus::Unsat, 0.5}};
  r.seed = 7;
  r.backend = "embedded-cdcl";
  r.lurd = "rrR";
  r.elapsed = 1.5;
  EXPECT_EQ(parse_record(to_json_line(r)), r);
  RunRecord untimed = parse_record(to_json_line(r, false));
  EXPECT_EQ(untimed.elapsed, 0);
  EXPECT_EQ(untimed.horizons[0].seconds, 0);
  EXPECT_EQ(to_json_line(untimed, false), to_json_line(r, false));
}

TEST(Record, NullBoundsAndErrors) {
  RunRecord r;
  r.instance = "x";
  std::string line = to_json_line(r);
  EXPECT_NE(line.find("\"lb\":null"), std::string::npos);
  EXPECT_NE(line.find("\"lurd\":null"), std::string::npos);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_record(line), r);
  EXPECT_THROW(parse_record("{"), ParseError);
  EXPECT_THROW(parse_record("{\"instance\":1}"), ParseError);
}

TEST(Record, StatusNames) {
  for (BoundStatus s : {BoundStatus::Optimal, BoundStatus::Bounded, BoundStatus::Unknown}) {
    EXPECT_EQ(bound_status_from(to_string(s)), s);
  }
  EXPECT_THROW(bound_status_from("done"), ParseError);
}
