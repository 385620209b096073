#include "insight/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace insight::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

std::vector<double> similarity_scan_serial(const TokenMultiset& query,
                                           std::span<const CodeSegment* const> segments) {
  std::vector<double> out(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) out[i] = cosine_similarity(query, segments[i]->tokens);
  return out;
}

std::vector<double> similarity_scan_omp(const TokenMultiset& query,
                                        std::span<const CodeSegment* const> segments) {
  std::vector<double> out(segments.size());
  const auto n = static_cast<std::int64_t>(segments.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = cosine_similarity(query, segments[static_cast<std::size_t>(i)]->tokens);
  }
  return out;
}

std::vector<AnswerRecommendation> recommend_batch_serial(const Index& index,
                                                         std::span<const RecommendTarget> targets,
                                                         const ScoringContext& ctx, const RankerConfig& cfg) {
  std::vector<AnswerRecommendation> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(recommend_for_answer(index, t.answer_id, t.segment_ordinal, ctx, cfg));
  return out;
}

std::vector<AnswerRecommendation> recommend_batch_omp(const Index& index,
                                                      std::span<const RecommendTarget> targets,
                                                      const ScoringContext& ctx, const RankerConfig& cfg) {
  std::vector<AnswerRecommendation> out(targets.size());
  std::vector<std::exception_ptr> errors(targets.size());
  const auto n = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = recommend_for_answer(index, targets[k].answer_id, targets[k].segment_ordinal, ctx, cfg);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace insight::kernels
