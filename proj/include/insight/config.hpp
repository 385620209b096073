#pragma once

#include <filesystem>
#include <string>

#include "insight/graphrank.hpp"
#include "insight/ingest.hpp"
#include "insight/matcher.hpp"
#include "insight/ranker.hpp"
#include "insight/sentiment.hpp"
#include "insight/topics.hpp"

namespace insight {

/// Data directory compiled into the build; INSIGHT_DATA_DIR overrides it.
std::filesystem::path default_data_dir();

struct AppConfig {
  std::filesystem::path index_dir = "insight-index";
  std::filesystem::path data_dir = default_data_dir();
  std::string filter_profile = "none";
  std::string sentiment_provider = "lexicon";
  int threads = 0;  // 0: all logical cores
  CodeBlockFilter code_filter;
  RankerConfig ranker;
  PageRankConfig pagerank;
  SentimentBuckets sentiment;
  TopicModelConfig topics;
  MatchOptions matcher;

  /// Range checks of every owning module; throws Error(Config).
  void validate() const;
};

}  // namespace insight
