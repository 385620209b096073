#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "insight/error.hpp"
#include "insight/eval.hpp"
#include "positions_fixture.hpp"
#include "test_support.hpp"

using namespace insight;
namespace ts = testing_support;

namespace {

class EvalTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ctx.prose_stop = &stop;
    ctx.sentiment = scorer.get();
  }

  StopLists stop = StopLists::load(ts::data_dir(), Domain::Any);
  std::unique_ptr<SentimentScorer> scorer = make_sentiment_scorer("lexicon", ts::data_dir());
  ScoringContext ctx;
};

}  // namespace

TEST(Gold, ParsesRow) {
  std::istringstream in("123,C4,android\n");
  const auto g = parse_gold(in);
  ASSERT_EQ(g.labels.size(), 1U);
  EXPECT_EQ(g.labels[0], (GoldLabel{123, Category::C4, Domain::Android}));
}

TEST(Gold, UnknownCategoryNamesLine) {
  std::istringstream in("123,C9,java\n");
  try {
    parse_gold(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Gold, DuplicateRejectedWithWarning) {
  std::istringstream in(
      "comment_id,category,domain\n1,C3,java\n2,C4,java\n3,C1,java\n4,C7,c#\n5,C4,android\n"
      "3,C4,java\n6,C2,java\n7,C5,java\n8,C6,csharp\n");
  const auto g = parse_gold(in);
  EXPECT_EQ(g.labels.size(), 8U);
  ASSERT_EQ(g.warnings.size(), 1U);
  EXPECT_NE(g.warnings[0].find("duplicate"), std::string::npos);
  EXPECT_EQ(g.labels[2].category, Category::C1);
}

TEST(Gold, MissingFile) {
  try {
    load_gold("/nonexistent/gold.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e.kind()), 2);
  }
}

TEST_F(EvalTest, PositionsFixtureMrr) {
  const auto f = ts::positions_fixture();
  const auto report = evaluate(f.index, f.gold, table2_heuristic_sets(), ctx, {});
  for (const auto& s : table2_heuristic_sets()) {
    const auto* c = report.cell(Domain::Android, Category::C4, s);
    ASSERT_NE(c, nullptr);
    EXPECT_NEAR(c->mrr(), 11.0 / 24.0, 1e-12) << s.str();
    EXPECT_EQ(c->retrieved, 3);
    EXPECT_EQ(c->gold, 4);
    EXPECT_EQ(c->answers, 4);
  }
}

TEST_F(EvalTest, RankOneGivesRrOne) {
  auto f = ts::positions_fixture();
  const std::vector<GoldLabel> gold = {f.gold[0]};
  const auto report = evaluate(f.index, gold, {HeuristicSet::all()}, ctx, {});
  const auto* c = report.cell(Domain::Android, Category::C4, HeuristicSet::all());
  EXPECT_DOUBLE_EQ(c->mrr(), 1.0);
  EXPECT_DOUBLE_EQ(c->recall(), 1.0);
}

TEST_F(EvalTest, MissGivesZero) {
  auto f = ts::positions_fixture();
  const std::vector<GoldLabel> gold = {f.gold[3]};
  const auto report = evaluate(f.index, gold, {HeuristicSet::all()}, ctx, {});
  const auto* c = report.cell(Domain::Android, Category::C4, HeuristicSet::all());
  EXPECT_EQ(c->mrr(), 0.0);
  EXPECT_EQ(c->retrieved, 0);
}

TEST_F(EvalTest, AddingRankOneAnswerHelps) {
  auto f = ts::positions_fixture();
  const std::vector<GoldLabel> three = {f.gold[1], f.gold[2], f.gold[3]};
  const auto before = evaluate(f.index, three, {HeuristicSet::all()}, ctx, {});
  const auto after = evaluate(f.index, f.gold, {HeuristicSet::all()}, ctx, {});
  const auto* b = before.cell(Domain::Android, Category::C4, HeuristicSet::all());
  const auto* a = after.cell(Domain::Android, Category::C4, HeuristicSet::all());
  EXPECT_GE(a->recall(), b->recall());
  EXPECT_GT(a->mrr(), b->mrr());
}

TEST_F(EvalTest, UnknownGoldSkippedWithWarning) {
  auto f = ts::positions_fixture();
  auto gold = f.gold;
  gold.push_back({99999, Category::C3, Domain::Android});
  const auto report = evaluate(f.index, gold, {HeuristicSet::all()}, ctx, {});
  EXPECT_EQ(report.warnings.size(), 1U);
  EXPECT_EQ(report.cell(Domain::Android, Category::C3, HeuristicSet::all())->gold, 0);
}

TEST_F(EvalTest, UnboundedKRecallIsVotedShare) {
  auto f = ts::positions_fixture();
  // answer 203 gets a zero-vote gold comment that can never be recommended
  auto extra = ts::make_comment(2999, 0, "unvoted", "", 203);
  f.index.comments.push_back(extra);
  f.index.reindex();
  auto gold = f.gold;
  gold.push_back({2999, Category::C4, Domain::Android});
  RankerConfig cfg;
  cfg.per_list_depth = 100;
  cfg.k = 100;
  const auto report = evaluate(f.index, gold, {HeuristicSet::all()}, ctx, cfg);
  EXPECT_DOUBLE_EQ(report.cell(Domain::Android, Category::C4, HeuristicSet::all())->recall(), 4.0 / 5.0);
}

TEST_F(EvalTest, SerialAndParallelAgree) {
  std::ifstream posts(ts::fixtures() / "eval30" / "Posts.xml");
  std::ifstream comments(ts::fixtures() / "eval30" / "Comments.xml");
  const auto index = build_index(parse_posts(posts), parse_comments(comments), ts::data_dir(), {});
  const auto gold = load_gold(ts::fixtures() / "eval30" / "gold.csv");
  const auto a = evaluate(index, gold.labels, table2_heuristic_sets(), ctx, {}, {true});
  const auto b = evaluate(index, gold.labels, table2_heuristic_sets(), ctx, {}, {false});
  EXPECT_EQ(eval_report_tsv(a), eval_report_tsv(b));
  for (const auto& c : a.cells) {
    EXPECT_GE(c.recall(), 0.0);
    EXPECT_LE(c.recall(), 1.0);
    EXPECT_GE(c.mrr(), 0.0);
    EXPECT_LE(c.mrr(), 1.0);
  }
  // five data rows plus the header
  const auto tsv = eval_report_tsv(a);
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 6);
}
