#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "insight/ingest.hpp"
#include "insight/ranker.hpp"
#include "insight/refine.hpp"
#include "insight/textproc.hpp"

namespace insight {

struct SegmentMatch {
  SegmentId segment_id;
  double similarity = 0.0;
  std::int64_t answer_id = 0;
  std::string question_title;
};

struct MatchOptions {
  Domain domain = Domain::Any;
  int top_n = 5;
  double tau = 0.3;
  bool parallel = true;

  void validate() const;
};

/// Tag a question must carry to pass the domain filter ("java", "android", "c#").
std::string_view domain_tag(Domain d);

/// Segments whose token cosine with the query reaches tau, best first (ties by
/// segment id), at most top_n. `query_stop` should carry the query domain's
/// keyword list. Throws Error(InvalidInput) when the query has no tokens.
std::vector<SegmentMatch> match_segments(const Index& index, std::string_view query_code,
                                         const StopLists& query_stop, const MatchOptions& opts);

struct RefinedComment {
  std::int64_t id = 0;
  std::string text_raw;
  std::string text_refined;
  HeuristicScores scores;
  int frequency = 0;
};

struct CodeRecommendation {
  SegmentMatch match;
  std::vector<RefinedComment> comments;
};

struct CodeRecommendationResult {
  /// "ok" or "no similar segment".
  std::string status;
  std::vector<CodeRecommendation> results;
};

/// Matches the query, ranks each matched segment's discussion and refines the
/// selected comments.
CodeRecommendationResult recommend_for_code(const Index& index, std::string_view query_code,
                                            const StopLists& query_stop, const ScoringContext& ctx,
                                            const RankerConfig& cfg, const MatchOptions& opts,
                                            const RefinementRules& rules);

inline constexpr int kRecommendSchemaVersion = 1;

std::string recommendations_json(const CodeRecommendationResult& result);
std::string recommendations_text(const CodeRecommendationResult& result);

}  // namespace insight
