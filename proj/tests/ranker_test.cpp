#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "insight/error.hpp"
#include "insight/ranker.hpp"
#include "test_support.hpp"

using namespace insight;
namespace ts = testing_support;

namespace {

HeuristicScores hs(std::int64_t id, std::int64_t p, std::int64_t wc, double r, double cr, int s) {
  return {id, p, wc, r, cr, s};
}

class RankerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ctx.prose_stop = &stop;
    ctx.sentiment = scorer.get();
  }

  Index showcase() {
    std::ifstream posts(ts::fixtures() / "showcase" / "Posts.xml");
    std::ifstream comments(ts::fixtures() / "showcase" / "Comments.xml");
    return build_index(parse_posts(posts), parse_comments(comments), ts::data_dir(), {});
  }

  StopLists stop = StopLists::load(ts::data_dir(), Domain::Any);
  std::unique_ptr<SentimentScorer> scorer = make_sentiment_scorer("lexicon", ts::data_dir());
  ScoringContext ctx;
};

CodeSegment segment_of(std::string_view code, const StopLists& stop) {
  CodeSegment s;
  s.id = {1, 0};
  s.raw_text = code;
  s.tokens = tokenize(code, TokenizeMode::Code, stop);
  return s;
}

}  // namespace

TEST(VoteFilter, Threshold) {
  const std::vector<DiscussionComment> c = {ts::make_comment(1, 0, "a"), ts::make_comment(2, 1, "b"),
                                            ts::make_comment(3, 5, "c")};
  EXPECT_EQ(filter_by_votes(c, {}).size(), 2U);
}

TEST(VoteFilter, AllZero) {
  const std::vector<DiscussionComment> c = {ts::make_comment(1, 0, "a"), ts::make_comment(2, 0, "b")};
  EXPECT_TRUE(filter_by_votes(c, {}).empty());
}

TEST_F(RankerTest, ShowcaseSurvivors) {
  const auto index = showcase();
  const auto kept = filter_by_votes(index.comments_for(200), {});
  std::vector<std::int64_t> ids;
  for (const auto& c : kept) ids.push_back(c.id);
  EXPECT_EQ(ids, (std::vector<std::int64_t>{1001, 1003, 1005, 1007, 1011}));
}

TEST_F(RankerTest, EmptyCommentScoresZero) {
  const auto seg = segment_of("int count = items.size();\nreturn count;", stop);
  const std::vector<DiscussionComment> c = {ts::make_comment(1, 2, "")};
  const auto s = score_all(c, seg, ctx);
  ASSERT_EQ(s.size(), 1U);
  EXPECT_EQ(s[0].word_count, 0);
  EXPECT_EQ(s[0].relevance, 0.0);
  EXPECT_EQ(s[0].sentiment, 0);
  EXPECT_EQ(s[0].popularity, 2);
}

TEST_F(RankerTest, CommentEqualToCodeHasFullRelevance) {
  const std::string code = "itemCount = fetchItems(userName);\nrenderList(itemCount);";
  const auto seg = segment_of(code, stop);
  const std::vector<DiscussionComment> c = {ts::make_comment(1, 2, code)};
  EXPECT_DOUBLE_EQ(score_all(c, seg, ctx)[0].relevance, 1.0);
}

TEST_F(RankerTest, CommentRankMatchesOracle) {
  const auto seg = segment_of("a.b();\nc.d();", stop);
  const std::vector<DiscussionComment> c = {ts::make_comment(1, 2, "x", "Ann"), ts::make_comment(2, 1, "y", "Bob"),
                                            ts::make_comment(3, 4, "@Ann right", "Cy")};
  const auto s = score_all(c, seg, ctx);
  const auto g = build_interaction_network(c);
  const auto oracle = ts::pagerank_oracle(g.nodes(), g.edges(), 0.85);
  for (const auto& x : s) EXPECT_NEAR(x.comment_rank, oracle.at(x.comment_id), 1e-5);
}

TEST(PerHeuristic, SentimentAscending) {
  const std::vector<HeuristicScores> s = {hs(1, 1, 1, 0, 1, 1), hs(2, 1, 1, 0, 1, -2), hs(3, 1, 1, 0, 1, 0)};
  const auto lists = rank_per_heuristic(s, {});
  EXPECT_EQ(lists.at(Heuristic::Sentiment), (std::vector<std::int64_t>{2, 3, 1}));
}

TEST(PerHeuristic, TiesByAscendingId) {
  const std::vector<HeuristicScores> s = {hs(9, 4, 1, 0, 1, 0), hs(3, 4, 1, 0, 1, 0), hs(5, 7, 1, 0, 1, 0)};
  EXPECT_EQ(rank_per_heuristic(s, {}).at(Heuristic::Popularity), (std::vector<std::int64_t>{5, 3, 9}));
}

TEST(PerHeuristic, TruncatedToDepth) {
  std::vector<HeuristicScores> s;
  for (int i = 1; i <= 7; ++i) s.push_back(hs(i, i, i, i * 0.1, i, i % 3));
  const auto lists = rank_per_heuristic(s, {});
  ASSERT_EQ(lists.size(), 5U);
  for (const auto& [h, ids] : lists) EXPECT_EQ(ids.size(), 5U);
}

TEST(Fusion, PresentEverywhereWins) {
  std::vector<HeuristicScores> s;
  for (int i = 1; i <= 8; ++i) s.push_back(hs(i, 1, 1, 0.1, 1, 0));
  HeuristicLists lists = {{Heuristic::Popularity, {4, 1, 2, 3, 5}},
                          {Heuristic::WordCount, {4, 1, 2, 6, 7}},
                          {Heuristic::Relevance, {4, 1, 8, 6, 7}},
                          {Heuristic::CommentRank, {4, 2, 8, 6, 7}},
                          {Heuristic::Sentiment, {4, 3, 8, 5, 6}}};
  const auto r = fuse_and_select(lists, s, {});
  ASSERT_EQ(r.entries.size(), 3U);
  EXPECT_EQ(r.entries[0].comment_id, 4);
  EXPECT_EQ(r.entries[0].frequency, 5);
}

TEST(Fusion, EqualFrequencyHigherPopularityWins) {
  const std::vector<HeuristicScores> s = {hs(1, 3, 1, 0.9, 1, 0), hs(2, 8, 1, 0.1, 1, 0)};
  HeuristicLists lists = {{Heuristic::Popularity, {2, 1}}, {Heuristic::Relevance, {1, 2}}};
  RankerConfig cfg;
  cfg.k = 1;
  const auto r = fuse_and_select(lists, s, cfg);
  EXPECT_EQ(r.ids(), std::vector<std::int64_t>{2});
  EXPECT_EQ(r.entries[0].tie_break_trace, "popularity");
}

TEST(Fusion, SixCommentHandFixtureMatchesOracle) {
  const std::vector<HeuristicScores> s = {hs(11, 5, 30, 0.40, 1.2, -1), hs(12, 9, 4, 0.05, 0.8, 1),
                                          hs(13, 2, 22, 0.55, 1.4, -2), hs(14, 2, 18, 0.10, 0.6, 0),
                                          hs(15, 7, 12, 0.30, 1.1, 2),  hs(16, 1, 3, 0.00, 0.4, 1)};
  RankerConfig cfg;
  const auto lists = rank_per_heuristic(s, cfg);
  EXPECT_EQ(fuse_and_select(lists, s, cfg).ids(), ts::fusion_oracle(lists, s, cfg.k));
}

TEST(Fusion, LengthIsMinOfKAndPool) {
  const std::vector<HeuristicScores> s = {hs(1, 3, 1, 0, 1, 0), hs(2, 2, 1, 0, 1, 0)};
  const auto r = fuse_and_select(rank_per_heuristic(s, {}), s, {});
  EXPECT_EQ(r.entries.size(), 2U);
}

TEST(Fusion, PopularityOnlyEqualsTopOfPList) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<HeuristicScores> s;
    for (int i = 1; i <= 9; ++i) {
      s.push_back(hs(i, static_cast<std::int64_t>(rng() % 6), static_cast<std::int64_t>(rng() % 30),
                     static_cast<double>(rng() % 10) / 10, 1.0, static_cast<int>(rng() % 5) - 2));
    }
    RankerConfig cfg;
    cfg.enabled = HeuristicSet{Heuristic::Popularity};
    const auto lists = rank_per_heuristic(s, cfg);
    const auto& p = lists.at(Heuristic::Popularity);
    // fusion breaks equal P by R, the list by id, so compare popularity sequences
    auto pop = [&](std::int64_t id) {
      return std::find_if(s.begin(), s.end(), [&](const auto& x) { return x.comment_id == id; })->popularity;
    };
    const auto got = fuse_and_select(lists, s, cfg).ids();
    ASSERT_EQ(got.size(), 3U);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(pop(got[i]), pop(p[i]));
  }
}

TEST(Fusion, PopularityOnlyDistinctValuesExact) {
  std::vector<HeuristicScores> s;
  for (int i = 1; i <= 7; ++i) s.push_back(hs(i, (i * 5) % 7, 1, 0.1 * i, 1.0, 0));
  RankerConfig cfg;
  cfg.enabled = HeuristicSet{Heuristic::Popularity};
  const auto lists = rank_per_heuristic(s, cfg);
  const auto& p = lists.at(Heuristic::Popularity);
  EXPECT_EQ(fuse_and_select(lists, s, cfg).ids(), std::vector<std::int64_t>(p.begin(), p.begin() + 3));
}

TEST(Fusion, RaisingPopularityNeverLowersFrequency) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    std::vector<HeuristicScores> s;
    for (int i = 1; i <= 8; ++i) {
      s.push_back(hs(i, static_cast<std::int64_t>(rng() % 10), static_cast<std::int64_t>(rng() % 30),
                     static_cast<double>(rng() % 10) / 10, static_cast<double>(rng() % 10) / 5,
                     static_cast<int>(rng() % 5) - 2));
    }
    const auto target = static_cast<std::size_t>(rng() % 8);
    auto raised = s;
    raised[target].popularity += 1 + static_cast<std::int64_t>(rng() % 5);
    auto freq = [&](const std::vector<HeuristicScores>& x) {
      int f = 0;
      for (const auto& [h, ids] : rank_per_heuristic(x, {})) f += std::count(ids.begin(), ids.end(), x[target].comment_id);
      return f;
    };
    EXPECT_GE(freq(raised), freq(s));
  }
}

TEST(Config, KBounds) {
  RankerConfig cfg;
  cfg.k = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.k = 26;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.k = 25;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(HeuristicSets, Table2Rows) {
  const auto sets = table2_heuristic_sets();
  ASSERT_EQ(sets.size(), 5U);
  EXPECT_EQ(sets[0].str(), "P");
  EXPECT_EQ(sets[1].str(), "P,R");
  EXPECT_EQ(sets[2].str(), "P,R,CR");
  EXPECT_EQ(sets[3].str(), "P,WC,R,CR");
  EXPECT_EQ(sets[4], HeuristicSet::all());
  EXPECT_EQ(HeuristicSet::parse("CR,P"), (HeuristicSet{Heuristic::Popularity, Heuristic::CommentRank}));
}

TEST_F(RankerTest, ShowcaseTopThree) {
  const auto index = showcase();
  const auto rec = recommend_for_answer(index, 200, -1, ctx, {});
  EXPECT_EQ(rec.recommendation.ids(), (std::vector<std::int64_t>{1007, 1011, 1001}));
}

TEST_F(RankerTest, SingleSurvivor) {
  auto index = showcase();
  for (auto& c : index.comments) {
    if (c.post_id == 200 && c.id != 1003) c.score = 0;
  }
  index.reindex();
  EXPECT_EQ(recommend_for_answer(index, 200, -1, ctx, {}).recommendation.ids(), std::vector<std::int64_t>{1003});
}

TEST_F(RankerTest, Errors) {
  const auto index = showcase();
  try {
    recommend_for_answer(index, 999, -1, ctx, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
  try {
    recommend_for_answer(index, 200, 4, ctx, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidTarget);
  }
}

TEST_F(RankerTest, DeterministicAndBounded) {
  const auto index = showcase();
  const auto a = recommend_for_answer(index, 200, 0, ctx, {});
  const auto b = recommend_for_answer(index, 200, 0, ctx, {});
  EXPECT_EQ(a.recommendation.ids(), b.recommendation.ids());
  EXPECT_EQ(explain_tsv(a), explain_tsv(b));
  EXPECT_LE(a.recommendation.entries.size(), 3U);
  for (auto id : a.recommendation.ids()) EXPECT_GE(index.comment(id)->score, 1);
}

TEST_F(RankerTest, RelevanceOrderScaleInvariant) {
  const auto index = showcase();
  const auto* seg = index.segment({200, 0});
  auto scaled = *seg;
  scaled.tokens = seg->tokens.scaled(4);
  const auto kept = filter_by_votes(index.comments_for(200), {});
  const auto a = rank_per_heuristic(score_all(kept, *seg, ctx), {});
  const auto b = rank_per_heuristic(score_all(kept, scaled, ctx), {});
  EXPECT_EQ(a.at(Heuristic::Relevance), b.at(Heuristic::Relevance));
}

TEST_F(RankerTest, ExplainHeader) {
  const auto index = showcase();
  const auto tsv = explain_tsv(recommend_for_answer(index, 200, -1, ctx, {}));
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "id\tP\tWC\tR\tCR\tS\tfrequency");
}
