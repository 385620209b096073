#include "insight/graphrank.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "insight/error.hpp"

namespace insight {

CommentGraph::CommentGraph(std::vector<std::int64_t> nodes) : nodes_(std::move(nodes)) {
  for (auto n : nodes_) out_degree_[n] = 0;
}

bool CommentGraph::add_edge(std::int64_t from, std::int64_t to) {
  if (from == to || !contains(from) || !contains(to)) return false;
  if (!edges_.emplace(from, to).second) return false;
  ++out_degree_[from];
  return true;
}

int CommentGraph::out_degree(std::int64_t node) const {
  auto it = out_degree_.find(node);
  return it == out_degree_.end() ? 0 : it->second;
}

bool CommentGraph::contains(std::int64_t node) const { return out_degree_.contains(node); }

void PageRankConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw Error(ErrorKind::Config, "damping must lie in (0,1)");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Config, "epsilon must be positive");
  if (max_iterations <= 0) throw Error(ErrorKind::Config, "max_iterations must be positive");
}

std::string normalize_display_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) continue;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

std::vector<std::string> extract_mentions(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '@') continue;
    // An '@' glued to a preceding word is an e-mail address or decorator, not a mention.
    if (i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '@')) continue;
    std::size_t j = i + 1;
    while (j < text.size()) {
      auto u = static_cast<unsigned char>(text[j]);
      if (std::isalnum(u) || u >= 0x80 || u == '_' || u == '-' || u == '.') {
        ++j;
      } else {
        break;
      }
    }
    auto name = text.substr(i + 1, j - i - 1);
    while (!name.empty() && (name.back() == '.' || name.back() == '-')) name.remove_suffix(1);
    if (!name.empty()) out.push_back(normalize_display_name(name));
    i = j > i ? j - 1 : i;
  }
  return out;
}

CommentGraph build_interaction_network(std::span<const DiscussionComment> comments) {
  std::vector<std::int64_t> ids;
  ids.reserve(comments.size());
  for (const auto& c : comments) ids.push_back(c.id);
  CommentGraph g(ids);

  for (std::size_t i = 0; i + 1 < comments.size(); ++i) {
    g.add_edge(comments[i].id, comments[i + 1].id);
    g.add_edge(comments[i + 1].id, comments[i].id);
  }

  for (std::size_t i = 1; i < comments.size(); ++i) {
    for (const auto& mention : extract_mentions(comments[i].text)) {
      if (mention.size() < 3) continue;
      std::optional<std::size_t> exact, prefix;
      for (std::size_t k = i; k-- > 0;) {
        const auto name = normalize_display_name(comments[k].author_display_name);
        if (name.empty()) continue;
        if (name == mention) {
          exact = k;
          break;
        }
        if (!prefix && name.starts_with(mention)) prefix = k;
      }
      if (auto target = exact ? exact : prefix) g.add_edge(comments[i].id, comments[*target].id);
    }
  }
  return g;
}

namespace {

// Incoming adjacency with source positions, built once per run.
struct Dense {
  std::vector<std::int64_t> ids;
  std::vector<std::vector<std::size_t>> incoming;
  std::vector<double> out_degree;
};

Dense densify(const CommentGraph& g) {
  Dense d;
  d.ids = g.nodes();
  std::map<std::int64_t, std::size_t> pos;
  for (std::size_t i = 0; i < d.ids.size(); ++i) pos[d.ids[i]] = i;
  d.incoming.resize(d.ids.size());
  d.out_degree.resize(d.ids.size());
  for (std::size_t i = 0; i < d.ids.size(); ++i) d.out_degree[i] = g.out_degree(d.ids[i]);
  for (const auto& [from, to] : g.edges()) d.incoming[pos.at(to)].push_back(pos.at(from));
  return d;
}

}  // namespace

PageRankResult pagerank(const CommentGraph& graph, const PageRankConfig& cfg) {
  cfg.validate();
  PageRankResult result;
  if (graph.nodes().empty()) {
    result.converged = true;
    return result;
  }
  const auto d = densify(graph);
  const auto n = d.ids.size();
  std::vector<double> pr(n, 1.0), next(n);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    double delta = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      double sum = 0.0;
      for (auto t : d.incoming[a]) sum += pr[t] / d.out_degree[t];
      next[a] = (1.0 - cfg.damping) + cfg.damping * sum;
      delta = std::max(delta, std::abs(next[a] - pr[a]));
    }
    pr.swap(next);
    result.iterations = it + 1;
    if (delta < cfg.epsilon) {
      result.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) result.scores[d.ids[i]] = pr[i];
  return result;
}

double pagerank_residual(const CommentGraph& graph, const std::map<std::int64_t, double>& scores,
                         double damping) {
  double worst = 0.0;
  for (auto node : graph.nodes()) {
    double sum = 0.0;
    for (const auto& [from, to] : graph.edges()) {
      if (to == node) sum += scores.at(from) / graph.out_degree(from);
    }
    worst = std::max(worst, std::abs(scores.at(node) - ((1.0 - damping) + damping * sum)));
  }
  return worst;
}

std::string to_dot(const CommentGraph& graph, const std::map<std::int64_t, double>* scores) {
  std::ostringstream out;
  out << "digraph comments {\n";
  for (auto n : graph.nodes()) {
    out << "  c" << n << " [label=\"" << n;
    if (scores != nullptr) {
      if (auto it = scores->find(n); it != scores->end()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", it->second);
        out << "\\n" << buf;
      }
    }
    out << "\"];\n";
  }
  for (const auto& [from, to] : graph.edges()) out << "  c" << from << " -> c" << to << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace insight
