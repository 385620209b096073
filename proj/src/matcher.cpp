#include "insight/matcher.hpp"

#include <algorithm>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "insight/error.hpp"
#include "insight/kernels.hpp"

namespace insight {

void MatchOptions::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorKind::Config, "tau must lie in [0,1]");
  if (top_n < 1) throw Error(ErrorKind::Config, "top_n must be >= 1");
}

std::string_view domain_tag(Domain d) {
  switch (d) {
    case Domain::Java:
      return "java";
    case Domain::Android:
      return "android";
    case Domain::CSharp:
      return "c#";
    case Domain::Any:
      return "";
  }
  return "";
}

std::vector<SegmentMatch> match_segments(const Index& index, std::string_view query_code,
                                         const StopLists& query_stop, const MatchOptions& opts) {
  opts.validate();
  const auto query = tokenize(query_code, TokenizeMode::Code, query_stop);
  if (query.empty()) throw Error(ErrorKind::InvalidInput, "query code has no usable tokens");

  std::vector<const CodeSegment*> pool;
  const auto tag = domain_tag(opts.domain);
  for (const auto* s : index.all_segments()) {
    if (!tag.empty()) {
      const auto* a = index.answer(s->answer_id());
      const auto* q = a == nullptr ? nullptr : index.question(a->question_id);
      if (q == nullptr || !q->has_tag(tag)) continue;
    }
    pool.push_back(s);
  }

  const auto sims = opts.parallel ? kernels::similarity_scan_omp(query, pool)
                                  : kernels::similarity_scan_serial(query, pool);

  std::vector<SegmentMatch> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (sims[i] <= 0.0 || sims[i] < opts.tau) continue;
    SegmentMatch m;
    m.segment_id = pool[i]->id;
    m.similarity = sims[i];
    m.answer_id = pool[i]->answer_id();
    if (const auto* a = index.answer(m.answer_id)) {
      if (const auto* q = index.question(a->question_id)) m.question_title = q->title;
    }
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const SegmentMatch& a, const SegmentMatch& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.segment_id < b.segment_id;
  });
  if (out.size() > static_cast<std::size_t>(opts.top_n)) out.resize(static_cast<std::size_t>(opts.top_n));
  return out;
}

CodeRecommendationResult recommend_for_code(const Index& index, std::string_view query_code,
                                            const StopLists& query_stop, const ScoringContext& ctx,
                                            const RankerConfig& cfg, const MatchOptions& opts,
                                            const RefinementRules& rules) {
  CodeRecommendationResult result;
  const auto matches = match_segments(index, query_code, query_stop, opts);
  result.status = matches.empty() ? "no similar segment" : "ok";
  for (const auto& m : matches) {
    auto rec = recommend_for_answer(index, m.answer_id, m.segment_id.ordinal, ctx, cfg);
    CodeRecommendation cr;
    cr.match = m;
    for (const auto& e : rec.recommendation.entries) {
      const auto* c = index.comment(e.comment_id);
      const auto* s = rec.scores_for(e.comment_id);
      if (c == nullptr || s == nullptr) throw Error(ErrorKind::Internal, "recommended comment vanished from index");
      cr.comments.push_back({c->id, c->text, refine_comment(c->text, rules), *s, e.frequency});
    }
    result.results.push_back(std::move(cr));
  }
  return result;
}

std::string recommendations_json(const CodeRecommendationResult& result) {
  using json = nlohmann::ordered_json;
  json results = json::array();
  for (const auto& r : result.results) {
    json comments = json::array();
    for (const auto& c : r.comments) {
      comments.push_back({{"id", c.id},
                          {"text_refined", c.text_refined},
                          {"scores",
                           {{"P", c.scores.popularity},
                            {"WC", c.scores.word_count},
                            {"R", c.scores.relevance},
                            {"CR", c.scores.comment_rank},
                            {"S", c.scores.sentiment},
                            {"frequency", c.frequency}}}});
    }
    results.push_back({{"segment_id", r.match.segment_id.str()},
                       {"similarity", r.match.similarity},
                       {"answer_url_id", r.match.answer_id},
                       {"question_title", r.match.question_title},
                       {"comments", std::move(comments)}});
  }
  json doc = {{"schema_version", kRecommendSchemaVersion}, {"status", result.status}, {"results", std::move(results)}};
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string recommendations_text(const CodeRecommendationResult& result) {
  std::ostringstream out;
  if (result.results.empty()) {
    out << result.status << "\n";
    return out.str();
  }
  char buf[32];
  for (const auto& r : result.results) {
    std::snprintf(buf, sizeof buf, "%.4f", r.match.similarity);
    out << "segment " << r.match.segment_id.str() << "  similarity " << buf << "  answer "
        << r.match.answer_id << "\n";
    if (!r.match.question_title.empty()) out << "  question: " << r.match.question_title << "\n";
    if (r.comments.empty()) out << "  (no up-voted comments)\n";
    for (std::size_t i = 0; i < r.comments.size(); ++i) {
      out << "  " << (i + 1) << ". [" << r.comments[i].id << "] " << r.comments[i].text_refined << "\n";
    }
  }
  return out.str();
}

}  // namespace insight
