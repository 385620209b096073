#include "insight/config.hpp"

#include <cstdlib>

#include "insight/error.hpp"

#ifndef INSIGHT_DATA_DIR
#define INSIGHT_DATA_DIR "data"
#endif

namespace insight {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("INSIGHT_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return INSIGHT_DATA_DIR;
}

void AppConfig::validate() const {
  if (threads < 0) throw Error(ErrorKind::Config, "threads must be >= 0");
  if (sentiment_provider != "lexicon" && sentiment_provider != "none") {
    throw Error(ErrorKind::Config, "unknown sentiment provider: " + sentiment_provider);
  }
  if (code_filter.min_lines < 1) throw Error(ErrorKind::Config, "min_lines must be >= 1");
  if (sentiment.weak < 1 || sentiment.strong < sentiment.weak || sentiment.negation_window < 0) {
    throw Error(ErrorKind::Config, "sentiment buckets need 1 <= weak <= strong and window >= 0");
  }
  FilterProfile::by_name(filter_profile);
  ranker.validate();
  pagerank.validate();
  topics.validate();
  matcher.validate();
}

}  // namespace insight
