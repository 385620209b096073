#pragma once

// Data-parallel batch kernels. Every kernel has an OpenMP version and a serial
// reference with identical results; tests compare the two and the benchmark
// target times them against each other.

#include <cstdint>
#include <span>
#include <vector>

#include "insight/ingest.hpp"
#include "insight/ranker.hpp"
#include "insight/textproc.hpp"

namespace insight::kernels {

/// Worker count used by the OpenMP kernels (1 when built without OpenMP).
int max_threads();
/// 0 keeps the runtime default (logical cores).
void set_threads(int n);

/// cosine_similarity(query, segment.tokens) for every segment, in input order.
std::vector<double> similarity_scan_serial(const TokenMultiset& query,
                                           std::span<const CodeSegment* const> segments);
std::vector<double> similarity_scan_omp(const TokenMultiset& query,
                                        std::span<const CodeSegment* const> segments);

struct RecommendTarget {
  std::int64_t answer_id = 0;
  int segment_ordinal = -1;  // negative: first segment
};

/// recommend_for_answer over many targets; result i belongs to target i.
/// The first failing target's error is rethrown after the batch.
std::vector<AnswerRecommendation> recommend_batch_serial(const Index& index,
                                                         std::span<const RecommendTarget> targets,
                                                         const ScoringContext& ctx, const RankerConfig& cfg);
std::vector<AnswerRecommendation> recommend_batch_omp(const Index& index,
                                                      std::span<const RecommendTarget> targets,
                                                      const ScoringContext& ctx, const RankerConfig& cfg);

}  // namespace insight::kernels
