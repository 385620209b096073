#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "insight/graphrank.hpp"
#include "insight/ingest.hpp"
#include "insight/sentiment.hpp"
#include "insight/textproc.hpp"

namespace insight {

enum class Heuristic { Popularity, WordCount, Relevance, CommentRank, Sentiment };

inline constexpr std::array<Heuristic, 5> kAllHeuristics = {
    Heuristic::Popularity, Heuristic::WordCount, Heuristic::Relevance, Heuristic::CommentRank,
    Heuristic::Sentiment};

/// "P", "WC", "R", "CR", "S".
std::string_view heuristic_symbol(Heuristic h);
Heuristic parse_heuristic(std::string_view symbol);

/// Subset of the five heuristics.
class HeuristicSet {
 public:
  constexpr HeuristicSet() = default;
  HeuristicSet(std::initializer_list<Heuristic> hs);

  static HeuristicSet all();
  /// Comma separated symbols, e.g. "P,R,CR".
  static HeuristicSet parse(std::string_view spec);

  bool contains(Heuristic h) const { return (bits_ >> static_cast<unsigned>(h)) & 1U; }
  void insert(Heuristic h) { bits_ |= 1U << static_cast<unsigned>(h); }
  std::size_t size() const;
  bool empty() const { return bits_ == 0; }
  std::vector<Heuristic> members() const;
  /// Symbols joined with ',' in the fixed order P,WC,R,CR,S.
  std::string str() const;

  friend bool operator==(HeuristicSet, HeuristicSet) = default;

 private:
  unsigned bits_ = 0;
};

/// The incremental ablation rows: {P}, {P,R}, {P,R,CR}, {P,R,CR,WC}, all five.
std::vector<HeuristicSet> table2_heuristic_sets();

struct HeuristicScores {
  std::int64_t comment_id = 0;
  std::int64_t popularity = 0;  // P: up-votes
  std::int64_t word_count = 0;  // WC: whitespace tokens of the raw text
  double relevance = 0.0;       // R: cosine to the target segment
  double comment_rank = 0.0;    // CR: PageRank in the interaction network
  int sentiment = 0;            // S: summed sentence polarity
};

struct RankerConfig {
  std::int64_t vote_filter_min = 1;
  int per_list_depth = 5;
  int k = 3;
  HeuristicSet enabled = HeuristicSet::all();
  /// Drops candidates with fewer words before ranking; 0 disables.
  int min_words = 0;
  /// tf-idf weighting for relevance instead of raw term frequency.
  bool tfidf = false;

  void validate() const;  // throws Error(Config)
};

/// Shared, read-only inputs for scoring.
struct ScoringContext {
  const StopLists* prose_stop = nullptr;
  const SentimentScorer* sentiment = nullptr;
  PageRankConfig pagerank;
};

struct RecommendationEntry {
  std::int64_t comment_id = 0;
  int frequency = 0;
  /// Which criterion placed this entry ahead of the next one: "frequency",
  /// "popularity", "relevance", "id", or "last".
  std::string tie_break_trace;
};

struct RankedRecommendation {
  std::vector<RecommendationEntry> entries;

  std::vector<std::int64_t> ids() const;
  /// 1-based position of `comment_id`, or nullopt when not recommended.
  std::optional<int> position_of(std::int64_t comment_id) const;
};

/// Each enabled heuristic's list of comment ids, best first, truncated.
using HeuristicLists = std::map<Heuristic, std::vector<std::int64_t>>;

/// Keeps comments with score >= vote_filter_min, preserving order.
std::vector<DiscussionComment> filter_by_votes(std::span<const DiscussionComment> comments,
                                               const RankerConfig& cfg);

std::int64_t whitespace_word_count(std::string_view text);

/// Computes P, WC, R, CR and S for every candidate against `segment`.
/// Candidates must be one answer's filtered comments in posting order.
std::vector<HeuristicScores> score_all(std::span<const DiscussionComment> candidates,
                                       const CodeSegment& segment, const ScoringContext& ctx,
                                       bool tfidf = false);

/// P, WC, R and CR descending, S ascending; ties by ascending comment id.
/// Every list is cut to per_list_depth. Disabled heuristics get no list.
HeuristicLists rank_per_heuristic(std::span<const HeuristicScores> scores, const RankerConfig& cfg);

/// Frequency = number of lists containing the comment. Picks the top K by
/// frequency, breaking ties by higher P, then higher R, then lower id.
/// Comments absent from every list still fill slots (frequency 0) when the
/// lists together hold fewer than K comments.
RankedRecommendation fuse_and_select(const HeuristicLists& lists, std::span<const HeuristicScores> scores,
                                     const RankerConfig& cfg);

/// Everything computed for one (answer, segment) target.
struct AnswerRecommendation {
  std::int64_t answer_id = 0;
  SegmentId segment;
  std::vector<DiscussionComment> candidates;
  std::vector<HeuristicScores> scores;
  HeuristicLists lists;
  RankedRecommendation recommendation;
  CommentGraph graph;

  const HeuristicScores* scores_for(std::int64_t comment_id) const;
  int frequency_of(std::int64_t comment_id) const;
};

/// filter_by_votes -> score_all -> rank_per_heuristic -> fuse_and_select.
/// Throws Error(NotFound) for an unknown answer and Error(InvalidTarget) when
/// the answer has no segment with `segment_ordinal` (or no segments at all).
/// A negative ordinal selects the answer's first segment.
AnswerRecommendation recommend_for_answer(const Index& index, std::int64_t answer_id, int segment_ordinal,
                                          const ScoringContext& ctx, const RankerConfig& cfg);

/// Same pipeline over caller-supplied comments (posting order).
AnswerRecommendation recommend_for_thread(std::span<const DiscussionComment> thread, const CodeSegment& segment,
                                          const ScoringContext& ctx, const RankerConfig& cfg);

/// TSV: id, P, WC, R, CR, S, frequency (one row per candidate, by id).
std::string explain_tsv(const AnswerRecommendation& rec);

}  // namespace insight
