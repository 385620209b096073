#include "insight/ranker.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "insight/error.hpp"

namespace insight {

std::string_view heuristic_symbol(Heuristic h) {
  switch (h) {
    case Heuristic::Popularity:
      return "P";
    case Heuristic::WordCount:
      return "WC";
    case Heuristic::Relevance:
      return "R";
    case Heuristic::CommentRank:
      return "CR";
    case Heuristic::Sentiment:
      return "S";
  }
  return "?";
}

Heuristic parse_heuristic(std::string_view symbol) {
  std::string s;
  for (char c : symbol) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::toupper(c)));
  }
  for (auto h : kAllHeuristics) {
    if (heuristic_symbol(h) == s) return h;
  }
  throw Error(ErrorKind::InvalidInput, "unknown heuristic: " + std::string(symbol));
}

HeuristicSet::HeuristicSet(std::initializer_list<Heuristic> hs) {
  for (auto h : hs) insert(h);
}

HeuristicSet HeuristicSet::all() {
  HeuristicSet s;
  for (auto h : kAllHeuristics) s.insert(h);
  return s;
}

HeuristicSet HeuristicSet::parse(std::string_view spec) {
  HeuristicSet s;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto comma = spec.find(',', start);
    auto part = spec.substr(start, comma == std::string_view::npos ? spec.size() - start : comma - start);
    if (part.find_first_not_of(" \t") != std::string_view::npos) s.insert(parse_heuristic(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty heuristic set");
  return s;
}

std::size_t HeuristicSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Heuristic> HeuristicSet::members() const {
  std::vector<Heuristic> out;
  for (auto h : kAllHeuristics) {
    if (contains(h)) out.push_back(h);
  }
  return out;
}

std::string HeuristicSet::str() const {
  std::string out;
  for (auto h : members()) {
    if (!out.empty()) out += ',';
    out += heuristic_symbol(h);
  }
  return out;
}

std::vector<HeuristicSet> table2_heuristic_sets() {
  using H = Heuristic;
  return {
      HeuristicSet{H::Popularity},
      HeuristicSet{H::Popularity, H::Relevance},
      HeuristicSet{H::Popularity, H::Relevance, H::CommentRank},
      HeuristicSet{H::Popularity, H::Relevance, H::CommentRank, H::WordCount},
      HeuristicSet::all(),
  };
}

void RankerConfig::validate() const {
  if (per_list_depth < 1) throw Error(ErrorKind::Config, "per_list_depth must be >= 1");
  if (enabled.empty()) throw Error(ErrorKind::Config, "at least one heuristic must be enabled");
  const auto cap = static_cast<long>(per_list_depth) * static_cast<long>(enabled.size());
  if (k < 1 || k > cap) {
    throw Error(ErrorKind::Config, "K must lie in [1, per_list_depth x enabled heuristics] = [1, " +
                                       std::to_string(cap) + "]");
  }
  if (min_words < 0) throw Error(ErrorKind::Config, "min_words must be >= 0");
}

std::vector<std::int64_t> RankedRecommendation::ids() const {
  std::vector<std::int64_t> out;
  for (const auto& e : entries) out.push_back(e.comment_id);
  return out;
}

std::optional<int> RankedRecommendation::position_of(std::int64_t comment_id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].comment_id == comment_id) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

std::vector<DiscussionComment> filter_by_votes(std::span<const DiscussionComment> comments,
                                               const RankerConfig& cfg) {
  std::vector<DiscussionComment> out;
  for (const auto& c : comments) {
    if (c.score >= cfg.vote_filter_min) out.push_back(c);
  }
  return out;
}

std::int64_t whitespace_word_count(std::string_view text) {
  std::int64_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::vector<HeuristicScores> score_all(std::span<const DiscussionComment> candidates,
                                       const CodeSegment& segment, const ScoringContext& ctx, bool tfidf) {
  if (ctx.prose_stop == nullptr || ctx.sentiment == nullptr) {
    throw Error(ErrorKind::Internal, "scoring context is incomplete");
  }
  std::vector<TokenMultiset> comment_tokens;
  comment_tokens.reserve(candidates.size());
  for (const auto& c : candidates) comment_tokens.push_back(tokenize(c.text, TokenizeMode::Prose, *ctx.prose_stop));

  std::optional<IdfTable> idf;
  if (tfidf) {
    std::vector<const TokenMultiset*> docs{&segment.tokens};
    for (const auto& t : comment_tokens) docs.push_back(&t);
    idf.emplace(docs);
  }

  const auto graph = build_interaction_network(candidates);
  const auto ranks = pagerank(graph, ctx.pagerank);

  std::vector<HeuristicScores> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    HeuristicScores s;
    s.comment_id = c.id;
    s.popularity = c.score;
    s.word_count = whitespace_word_count(c.text);
    s.relevance = idf ? cosine_similarity(comment_tokens[i], segment.tokens, *idf)
                      : cosine_similarity(comment_tokens[i], segment.tokens);
    s.comment_rank = ranks.scores.at(c.id);
    s.sentiment = ctx.sentiment->score(c.text);
    out.push_back(s);
  }
  return out;
}

namespace {

// Strict weak ordering "a ranks before b" for one heuristic list.
bool list_before(Heuristic h, const HeuristicScores& a, const HeuristicScores& b) {
  auto desc = [&](auto x, auto y) { return x != y ? x > y : a.comment_id < b.comment_id; };
  switch (h) {
    case Heuristic::Popularity:
      return desc(a.popularity, b.popularity);
    case Heuristic::WordCount:
      return desc(a.word_count, b.word_count);
    case Heuristic::Relevance:
      return desc(a.relevance, b.relevance);
    case Heuristic::CommentRank:
      return desc(a.comment_rank, b.comment_rank);
    case Heuristic::Sentiment:
      return a.sentiment != b.sentiment ? a.sentiment < b.sentiment : a.comment_id < b.comment_id;
  }
  return false;
}

}  // namespace

HeuristicLists rank_per_heuristic(std::span<const HeuristicScores> scores, const RankerConfig& cfg) {
  HeuristicLists lists;
  for (auto h : cfg.enabled.members()) {
    std::vector<const HeuristicScores*> order;
    for (const auto& s : scores) order.push_back(&s);
    std::sort(order.begin(), order.end(), [h](const auto* a, const auto* b) { return list_before(h, *a, *b); });
    auto& ids = lists[h];
    const auto depth = std::min<std::size_t>(order.size(), static_cast<std::size_t>(cfg.per_list_depth));
    for (std::size_t i = 0; i < depth; ++i) ids.push_back(order[i]->comment_id);
  }
  return lists;
}

RankedRecommendation fuse_and_select(const HeuristicLists& lists, std::span<const HeuristicScores> scores,
                                     const RankerConfig& cfg) {
  struct Row {
    const HeuristicScores* s;
    int frequency;
  };
  std::map<std::int64_t, int> freq;
  for (const auto& [h, ids] : lists) {
    for (auto id : ids) ++freq[id];
  }
  std::vector<Row> rows;
  for (const auto& s : scores) {
    auto it = freq.find(s.comment_id);
    rows.push_back({&s, it == freq.end() ? 0 : it->second});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    if (a.s->popularity != b.s->popularity) return a.s->popularity > b.s->popularity;
    if (a.s->relevance != b.s->relevance) return a.s->relevance > b.s->relevance;
    return a.s->comment_id < b.s->comment_id;
  });

  RankedRecommendation rec;
  const auto k = std::min<std::size_t>(rows.size(), static_cast<std::size_t>(cfg.k));
  for (std::size_t i = 0; i < k; ++i) {
    RecommendationEntry e;
    e.comment_id = rows[i].s->comment_id;
    e.frequency = rows[i].frequency;
    if (i + 1 >= rows.size()) {
      e.tie_break_trace = "last";
    } else {
      const auto& next = rows[i + 1];
      if (rows[i].frequency != next.frequency) {
        e.tie_break_trace = "frequency";
      } else if (rows[i].s->popularity != next.s->popularity) {
        e.tie_break_trace = "popularity";
      } else if (rows[i].s->relevance != next.s->relevance) {
        e.tie_break_trace = "relevance";
      } else {
        e.tie_break_trace = "id";
      }
    }
    rec.entries.push_back(std::move(e));
  }
  return rec;
}

const HeuristicScores* AnswerRecommendation::scores_for(std::int64_t comment_id) const {
  for (const auto& s : scores) {
    if (s.comment_id == comment_id) return &s;
  }
  return nullptr;
}

int AnswerRecommendation::frequency_of(std::int64_t comment_id) const {
  int f = 0;
  for (const auto& [h, ids] : lists) f += static_cast<int>(std::count(ids.begin(), ids.end(), comment_id));
  return f;
}

AnswerRecommendation recommend_for_thread(std::span<const DiscussionComment> thread, const CodeSegment& segment,
                                          const ScoringContext& ctx, const RankerConfig& cfg) {
  cfg.validate();
  AnswerRecommendation out;
  out.answer_id = segment.answer_id();
  out.segment = segment.id;
  out.candidates = filter_by_votes(thread, cfg);
  if (out.candidates.empty()) return out;

  // CR is defined on the vote-filtered network, before any word-count cut.
  out.graph = build_interaction_network(out.candidates);
  auto scores = score_all(out.candidates, segment, ctx, cfg.tfidf);
  if (cfg.min_words > 0) {
    std::erase_if(scores, [&](const HeuristicScores& s) { return s.word_count < cfg.min_words; });
  }
  out.scores = std::move(scores);
  out.lists = rank_per_heuristic(out.scores, cfg);
  out.recommendation = fuse_and_select(out.lists, out.scores, cfg);
  return out;
}

AnswerRecommendation recommend_for_answer(const Index& index, std::int64_t answer_id, int segment_ordinal,
                                          const ScoringContext& ctx, const RankerConfig& cfg) {
  const auto* answer = index.answer(answer_id);
  if (answer == nullptr) throw Error(ErrorKind::NotFound, "answer " + std::to_string(answer_id) + " not in index");
  if (answer->segments.empty()) {
    throw Error(ErrorKind::InvalidTarget, "answer " + std::to_string(answer_id) + " has no code segments");
  }
  const CodeSegment* segment =
      segment_ordinal < 0 ? &answer->segments.front() : answer->segment(segment_ordinal);
  if (segment == nullptr) {
    throw Error(ErrorKind::InvalidTarget, "answer " + std::to_string(answer_id) + " has no segment with ordinal " +
                                              std::to_string(segment_ordinal));
  }
  return recommend_for_thread(index.comments_for(answer_id), *segment, ctx, cfg);
}

std::string explain_tsv(const AnswerRecommendation& rec) {
  std::ostringstream out;
  out << "id\tP\tWC\tR\tCR\tS\tfrequency\n";
  auto rows = rec.scores;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.comment_id < b.comment_id; });
  char buf[64];
  for (const auto& s : rows) {
    out << s.comment_id << '\t' << s.popularity << '\t' << s.word_count << '\t';
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f", s.relevance, s.comment_rank);
    out << buf << '\t' << s.sentiment << '\t' << rec.frequency_of(s.comment_id) << '\n';
  }
  return out.str();
}

}  // namespace insight
