#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "insight/graphrank.hpp"
#include "insight/ingest.hpp"
#include "insight/ranker.hpp"

namespace testing_support {

inline std::filesystem::path fixtures() { return INSIGHT_FIXTURE_DIR; }
inline std::filesystem::path data_dir() { return INSIGHT_TEST_DATA_DIR; }

inline insight::DiscussionComment make_comment(std::int64_t id, std::int64_t score, std::string text,
                                               std::string author = "", std::int64_t post = 1) {
  insight::DiscussionComment c;
  c.id = id;
  c.post_id = post;
  c.score = score;
  c.text = std::move(text);
  c.author_display_name = author.empty() ? "user" + std::to_string(id) : std::move(author);
  c.author_id = id;
  return c;
}

/// Dense power iteration of PR(A) = (1-d) + d * sum PR(T)/C(T), run for a fixed
/// number of rounds with no convergence test.
inline std::map<std::int64_t, double> pagerank_oracle(const std::vector<std::int64_t>& nodes,
                                                      const std::set<std::pair<std::int64_t, std::int64_t>>& edges,
                                                      double d, int rounds = 1000) {
  const auto n = nodes.size();
  std::map<std::int64_t, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[nodes[i]] = i;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  std::vector<int> out(n, 0);
  for (const auto& [a, b] : edges) ++out[pos[a]];
  for (const auto& [a, b] : edges) m[pos[b]][pos[a]] = 1.0 / out[pos[a]];
  std::vector<double> pr(n, 1.0), next(n);
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * pr[j];
      next[i] = (1.0 - d) + d * s;
    }
    pr.swap(next);
  }
  std::map<std::int64_t, double> result;
  for (std::size_t i = 0; i < n; ++i) result[nodes[i]] = pr[i];
  return result;
}

/// Fusion by exhaustive pairwise comparison: a comment's rank is the number of
/// other comments that beat it under (frequency, P, R, lower id).
inline std::vector<std::int64_t> fusion_oracle(const insight::HeuristicLists& lists,
                                               const std::vector<insight::HeuristicScores>& scores, int k) {
  std::map<std::int64_t, int> freq;
  for (const auto& s : scores) freq[s.comment_id] = 0;
  for (const auto& [h, ids] : lists) {
    for (auto id : ids) ++freq[id];
  }
  auto beats = [&](const insight::HeuristicScores& a, const insight::HeuristicScores& b) {
    if (freq[a.comment_id] != freq[b.comment_id]) return freq[a.comment_id] > freq[b.comment_id];
    if (a.popularity != b.popularity) return a.popularity > b.popularity;
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.comment_id < b.comment_id;
  };
  std::vector<std::pair<int, std::int64_t>> ranked;
  for (const auto& a : scores) {
    int better = 0;
    for (const auto& b : scores) {
      if (b.comment_id != a.comment_id && beats(b, a)) ++better;
    }
    ranked.push_back({better, a.comment_id});
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::int64_t> out;
  for (const auto& [r, id] : ranked) {
    if (static_cast<int>(out.size()) == k) break;
    out.push_back(id);
  }
  return out;
}

/// Plain floating point cosine over count maps.
inline double cosine_oracle(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, x] : a) {
    na += x * x;
    if (auto it = b.find(t); it != b.end()) dot += x * it->second;
  }
  for (const auto& [t, y] : b) nb += y * y;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace testing_support
