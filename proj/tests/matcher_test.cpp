#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "insight/error.hpp"
#include "insight/matcher.hpp"
#include "test_support.hpp"

using namespace insight;
namespace ts = testing_support;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

class MatcherTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::ifstream posts(ts::fixtures() / "showcase" / "Posts.xml");
    std::ifstream comments(ts::fixtures() / "showcase" / "Comments.xml");
    index = build_index(parse_posts(posts), parse_comments(comments), ts::data_dir(), {});
    ctx.prose_stop = &any;
    ctx.sentiment = scorer.get();
  }

  Index index;
  StopLists any = StopLists::load(ts::data_dir(), Domain::Any);
  StopLists android = StopLists::load(ts::data_dir(), Domain::Android);
  std::unique_ptr<SentimentScorer> scorer = make_sentiment_scorer("lexicon", ts::data_dir());
  RefinementRules rules = RefinementRules::load(ts::data_dir() / "refine");
  ScoringContext ctx;
};

}  // namespace

TEST_F(MatcherTest, IdenticalQueryScoresOne) {
  const auto& code = index.segment({201, 0})->raw_text;
  const auto m = match_segments(index, code, android, {});
  ASSERT_FALSE(m.empty());
  EXPECT_EQ(m[0].segment_id, (SegmentId{201, 0}));
  EXPECT_DOUBLE_EQ(m[0].similarity, 1.0);
}

TEST_F(MatcherTest, NoSharedTokens) {
  EXPECT_TRUE(match_segments(index, "quux zorble", android, {}).empty());
}

TEST_F(MatcherTest, EmptyQueryIsInvalid) {
  try {
    match_segments(index, "if (x) { }", android, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST_F(MatcherTest, ListingQueryFindsSoftKeyboardSegment) {
  const auto query = slurp(ts::fixtures() / "showcase" / "query.java");
  MatchOptions opts;
  opts.tau = 0.0;
  const auto m = match_segments(index, query, android, opts);
  ASSERT_GE(m.size(), 1U);
  EXPECT_EQ(m[0].segment_id, (SegmentId{200, 0}));
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LT(m[i].similarity, m[0].similarity);
}

TEST_F(MatcherTest, DomainFilter) {
  const auto& code = index.segment({201, 0})->raw_text;
  MatchOptions opts;
  opts.domain = Domain::Android;
  opts.tau = 0.0;
  for (const auto& m : match_segments(index, code, android, opts)) EXPECT_NE(m.answer_id, 201);
}

TEST_F(MatcherTest, TauMonotone) {
  const auto query = slurp(ts::fixtures() / "showcase" / "query.java");
  std::vector<SegmentId> prev;
  bool first = true;
  for (double tau : {0.0, 0.1, 0.3, 0.6, 0.9, 1.0}) {
    MatchOptions opts;
    opts.tau = tau;
    std::vector<SegmentId> ids;
    for (const auto& m : match_segments(index, query, android, opts)) ids.push_back(m.segment_id);
    if (!first) {
      for (const auto& id : ids) EXPECT_NE(std::find(prev.begin(), prev.end(), id), prev.end());
    }
    prev = ids;
    first = false;
  }
}

TEST_F(MatcherTest, WhitespaceInsensitive) {
  const auto query = slurp(ts::fixtures() / "showcase" / "query.java");
  std::string squashed;
  for (char c : query) squashed += (c == '\n' || c == '\t') ? ' ' : c;
  const auto a = match_segments(index, query, android, {});
  const auto b = match_segments(index, squashed, android, {});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].similarity, b[i].similarity);
}

TEST_F(MatcherTest, NoMatchStatus) {
  MatchOptions opts;
  opts.tau = 1.0;
  const auto r = recommend_for_code(index, "setSoftInputMode zorble", android, ctx, {}, opts, rules);
  EXPECT_EQ(r.status, "no similar segment");
  EXPECT_TRUE(r.results.empty());
}

TEST_F(MatcherTest, PoolSmallerThanK) {
  const auto& code = index.segment({201, 0})->raw_text;
  MatchOptions opts;
  opts.top_n = 1;
  const auto r = recommend_for_code(index, code, android, ctx, {}, opts, rules);
  ASSERT_EQ(r.results.size(), 1U);
  EXPECT_EQ(r.results[0].comments.size(), 2U);
}

TEST_F(MatcherTest, EndToEndRefinedShowcase) {
  const auto query = slurp(ts::fixtures() / "showcase" / "query.java");
  const auto r = recommend_for_code(index, query, android, ctx, {}, {}, rules);
  ASSERT_EQ(r.status, "ok");
  ASSERT_FALSE(r.results.empty());
  const auto& top = r.results[0];
  ASSERT_EQ(top.comments.size(), 3U);
  EXPECT_EQ(top.comments[0].id, 1007);
  EXPECT_EQ(top.comments[1].id, 1011);
  EXPECT_EQ(top.comments[2].id, 1001);
  for (const auto& c : top.comments) EXPECT_EQ(c.text_refined, refine_comment(c.text_raw, rules));
  EXPECT_EQ(top.comments[2].text_refined,
            "This works, but on some devices one had to call setSoftInputMode before show() or the keyboard never "
            "appears.");

  const auto doc = nlohmann::json::parse(recommendations_json(r));
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["results"][0]["segment_id"], "200:0");
  EXPECT_EQ(doc["results"][0]["comments"][0]["scores"]["P"], 23);
}
