#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "insight/ingest.hpp"

namespace insight {

/// Directed interaction network over the vote-filtered comments of one answer.
class CommentGraph {
 public:
  CommentGraph() = default;
  explicit CommentGraph(std::vector<std::int64_t> nodes);

  /// Ignores self-loops, unknown endpoints and duplicates. Returns true if the
  /// edge was inserted.
  bool add_edge(std::int64_t from, std::int64_t to);

  const std::vector<std::int64_t>& nodes() const { return nodes_; }
  const std::set<std::pair<std::int64_t, std::int64_t>>& edges() const { return edges_; }
  /// C(T): number of outbound edges of `node`.
  int out_degree(std::int64_t node) const;
  bool contains(std::int64_t node) const;
  bool has_edge(std::int64_t from, std::int64_t to) const { return edges_.contains({from, to}); }

 private:
  std::vector<std::int64_t> nodes_;
  std::set<std::pair<std::int64_t, std::int64_t>> edges_;
  std::map<std::int64_t, int> out_degree_;
};

struct PageRankConfig {
  double damping = 0.85;
  double epsilon = 1e-6;
  int max_iterations = 100;

  void validate() const;  // throws Error(Config)
};

/// Lowercased with whitespace removed; the form `@name` mentions are matched in.
std::string normalize_display_name(std::string_view name);

/// `@name` mentions in comment text, normalized, in order of appearance.
std::vector<std::string> extract_mentions(std::string_view text);

/**
 * Builds the network for comments given in posting order.
 *
 * Consecutive comments are linked in both directions. A comment mentioning
 * `@name` also links to the most recent earlier comment whose author's
 * normalized display name starts with the mention (at least 3 characters);
 * an exact name match is preferred over a prefix match. Mentions with no
 * earlier participant are ignored.
 */
CommentGraph build_interaction_network(std::span<const DiscussionComment> comments);

struct PageRankResult {
  std::map<std::int64_t, double> scores;
  int iterations = 0;
  bool converged = false;
};

/**
 * Non-normalized PageRank, PR(A) = (1-d) + d * sum over T->A of PR(T)/C(T).
 *
 * Jacobi iteration from 1.0 per node until the largest per-node change drops
 * below epsilon or max_iterations is hit. Nodes without outbound edges add no
 * mass anywhere, so every score stays >= 1-d.
 */
PageRankResult pagerank(const CommentGraph& graph, const PageRankConfig& cfg = {});

/// Largest |PR(A) - ((1-d) + d * sum PR(T)/C(T))| over all nodes.
double pagerank_residual(const CommentGraph& graph, const std::map<std::int64_t, double>& scores,
                         double damping);

/// Graphviz rendering; node labels carry the score when given.
std::string to_dot(const CommentGraph& graph, const std::map<std::int64_t, double>* scores = nullptr);

}  // namespace insight
