#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "insight/ingest.hpp"
#include "insight/textproc.hpp"

namespace insight {

struct ApiDocument {
  std::int64_t answer_id = 0;
  std::vector<std::string> tokens;
};

struct ApiCorpus {
  Domain domain = Domain::Any;
  std::vector<ApiDocument> documents;
};

/// One document per accepted answer of the domain: the token multiset of all
/// its segments expanded into a list. Answers without tokens are dropped.
ApiCorpus build_api_corpus(const Index& index, Domain domain);

struct TopicModelConfig {
  int k = 150;
  double beta = 0.006;
  int iterations = 1000;
  int words_per_topic = 6;
  int top_topics_per_doc = 5;
  /// Topics whose share of token assignments falls below this are dropped
  /// from the report.
  double prominence_threshold = 0.006;
  std::uint64_t seed = 1;

  /// Symmetric document-topic prior, 1/K per topic.
  double alpha() const { return 1.0 / static_cast<double>(k); }
  void validate() const;
};

struct TopicModel {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<std::int64_t>> topic_word_counts;  // [k][v]
  std::vector<std::vector<std::int64_t>> doc_topic_counts;   // [d][k]
  std::vector<std::int64_t> topic_totals;                    // [k]
  std::vector<std::int64_t> doc_answer_ids;                  // [d]
  std::vector<std::vector<std::string>> top_words;           // [k][words_per_topic]
  std::vector<double> prominence;                            // [k], share of assignments

  /// (n_dk + alpha) / (n_d + K alpha); sums to 1.
  std::vector<double> doc_topic_distribution(std::size_t doc) const;
  /// (n_kw + beta) / (n_k + V beta).
  std::vector<double> topic_word_distribution(int topic) const;
  std::int64_t total_assignments() const;
};

/// Collapsed Gibbs sampler. Exposed so callers can observe single sweeps.
class GibbsSampler {
 public:
  GibbsSampler(const ApiCorpus& corpus, const TopicModelConfig& cfg);

  void sweep();
  int sweeps_done() const { return sweeps_; }
  /// Number of tokens currently holding a topic assignment.
  std::int64_t assigned_tokens() const;
  std::int64_t corpus_tokens() const { return static_cast<std::int64_t>(token_count_); }
  /// Checks that the count tables agree with the assignment vector.
  bool counts_consistent() const;

  TopicModel model() const;

 private:
  double uniform();

  TopicModelConfig cfg_;
  std::vector<std::string> vocab_;
  std::vector<std::int64_t> answer_ids_;
  std::vector<std::vector<int>> words_;   // [d][i] word id
  std::vector<std::vector<int>> topics_;  // [d][i] topic id
  std::vector<std::vector<std::int64_t>> nkw_;
  std::vector<std::vector<std::int64_t>> ndk_;
  std::vector<std::int64_t> nk_;
  std::vector<double> weights_;
  std::size_t token_count_ = 0;
  std::mt19937_64 rng_;
  int sweeps_ = 0;
};

/// Runs cfg.iterations sweeps. Deterministic for a given seed. Throws
/// Error(Config) when K exceeds the vocabulary size or the corpus is empty.
TopicModel fit_lda(const ApiCorpus& corpus, const TopicModelConfig& cfg);

struct RankedTopic {
  int topic_id = 0;
  std::int64_t doc_frequency = 0;
  double prominence = 0.0;
  std::vector<std::string> top_words;
};

struct TopicReport {
  std::vector<RankedTopic> topics;  // by doc_frequency desc, then topic id
  std::size_t dropped_topics = 0;
  std::vector<std::string> warnings;
};

/// Drops topics under the prominence threshold, lists each document's top
/// topics among the survivors (only topics actually assigned in the document),
/// and counts per topic how many documents list it.
TopicReport rank_topics(const TopicModel& model, const TopicModelConfig& cfg);

/// TSV: rank, topic_id, doc_frequency, then the top words.
std::string topic_report_tsv(const TopicReport& report);

}  // namespace insight
