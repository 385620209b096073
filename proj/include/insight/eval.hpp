#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "insight/ingest.hpp"
#include "insight/ranker.hpp"
#include "insight/textproc.hpp"

namespace insight {

/// C1 clarification question, C2 code documentation, C3 tips, C4 bugs and
/// concerns, C5 strengths, C6 miscellaneous, C7 non-informative.
enum class Category { C1 = 1, C2, C3, C4, C5, C6, C7 };

std::optional<Category> parse_category(std::string_view s);
std::string category_name(Category c);

struct GoldLabel {
  std::int64_t comment_id = 0;
  Category category = Category::C7;
  Domain domain = Domain::Any;

  friend bool operator==(const GoldLabel&, const GoldLabel&) = default;
};

struct GoldFile {
  std::vector<GoldLabel> labels;
  std::vector<std::string> warnings;
};

/// CSV rows `comment_id,category,domain`; an optional header row and blank
/// lines are skipped. A repeated comment id keeps the first row and warns.
/// Throws Error(Parse) naming the 1-based line for a malformed row.
GoldFile parse_gold(std::istream& in);
GoldFile load_gold(const std::filesystem::path& path);

struct EvalCell {
  Domain domain = Domain::Any;
  Category category = Category::C3;
  HeuristicSet set;
  std::int64_t retrieved = 0;
  std::int64_t gold = 0;
  /// Answers holding at least one gold comment of this category.
  std::int64_t answers = 0;
  double rr_sum = 0.0;

  double recall() const { return gold == 0 ? 0.0 : static_cast<double>(retrieved) / static_cast<double>(gold); }
  double mrr() const { return answers == 0 ? 0.0 : rr_sum / static_cast<double>(answers); }
};

struct EvalReport {
  std::vector<HeuristicSet> sets;
  std::vector<Domain> domains;  // java, android, csharp (those with gold)
  std::vector<EvalCell> cells;
  std::vector<std::string> warnings;

  const EvalCell* cell(Domain d, Category c, HeuristicSet s) const;
  /// Macro average over domains that have gold of category `c`.
  std::optional<double> average_recall(Category c, HeuristicSet s) const;
  std::optional<double> average_mrr(Category c, HeuristicSet s) const;
};

struct EvalOptions {
  bool parallel = true;
};

/// Runs the recommender on the first segment of every answer holding a gold
/// C3 or C4 comment, once per heuristic set, and scores the top-K against the
/// gold labels.
EvalReport evaluate(const Index& index, const std::vector<GoldLabel>& gold, const std::vector<HeuristicSet>& sets,
                    const ScoringContext& ctx, const RankerConfig& cfg, const EvalOptions& opts = {});

/// One row per heuristic set; per domain and category: CE as "hit(total)",
/// recall and MRR, then the averages.
std::string eval_report_tsv(const EvalReport& report);

}  // namespace insight
