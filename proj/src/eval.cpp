#include "insight/eval.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "insight/error.hpp"
#include "insight/kernels.hpp"

namespace insight {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<std::int64_t> parse_id(std::string_view s) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::array<Domain, 3> kDomains = {Domain::Java, Domain::Android, Domain::CSharp};
constexpr std::array<Category, 2> kInsightful = {Category::C3, Category::C4};

std::string fmt(const char* spec, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::optional<Category> parse_category(std::string_view s) {
  if (s.size() != 2 || (s[0] != 'C' && s[0] != 'c')) return std::nullopt;
  if (s[1] < '1' || s[1] > '7') return std::nullopt;
  return static_cast<Category>(s[1] - '0');
}

std::string category_name(Category c) { return "C" + std::to_string(static_cast<int>(c)); }

GoldFile parse_gold(std::istream& in) {
  GoldFile out;
  std::set<std::int64_t> seen;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto fields = split_csv(body);
    const bool header = first_content && !parse_id(fields[0]).has_value();
    first_content = false;
    if (header) continue;

    const auto where = "gold line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) throw Error(ErrorKind::Parse, where + "expected comment_id,category,domain");
    const auto id = parse_id(fields[0]);
    if (!id) throw Error(ErrorKind::Parse, where + "bad comment id '" + std::string(fields[0]) + "'");
    const auto cat = parse_category(fields[1]);
    if (!cat) throw Error(ErrorKind::Parse, where + "unknown category '" + std::string(fields[1]) + "'");
    Domain domain = Domain::Any;
    try {
      domain = parse_domain(fields[2]);
    } catch (const Error&) {
    }
    if (domain == Domain::Any) throw Error(ErrorKind::Parse, where + "unknown domain '" + std::string(fields[2]) + "'");

    if (!seen.insert(*id).second) {
      out.warnings.push_back(where + "duplicate comment id " + std::to_string(*id) + " ignored");
      continue;
    }
    out.labels.push_back({*id, *cat, domain});
  }
  return out;
}

GoldFile load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputNotFound, "input not found: " + path.string());
  return parse_gold(in);
}

const EvalCell* EvalReport::cell(Domain d, Category c, HeuristicSet s) const {
  for (const auto& x : cells) {
    if (x.domain == d && x.category == c && x.set == s) return &x;
  }
  return nullptr;
}

std::optional<double> EvalReport::average_recall(Category c, HeuristicSet s) const {
  double sum = 0.0;
  int n = 0;
  for (auto d : domains) {
    const auto* x = cell(d, c, s);
    if (x == nullptr || x->gold == 0) continue;
    sum += x->recall();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::optional<double> EvalReport::average_mrr(Category c, HeuristicSet s) const {
  double sum = 0.0;
  int n = 0;
  for (auto d : domains) {
    const auto* x = cell(d, c, s);
    if (x == nullptr || x->answers == 0) continue;
    sum += x->mrr();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

EvalReport evaluate(const Index& index, const std::vector<GoldLabel>& gold, const std::vector<HeuristicSet>& sets,
                    const ScoringContext& ctx, const RankerConfig& cfg, const EvalOptions& opts) {
  EvalReport report;
  report.sets = sets;

  std::map<std::int64_t, std::vector<GoldLabel>> by_answer;
  for (const auto& g : gold) {
    if (g.category != Category::C3 && g.category != Category::C4) continue;
    const auto* c = index.comment(g.comment_id);
    if (c == nullptr) {
      report.warnings.push_back("gold comment " + std::to_string(g.comment_id) + " not in index; skipped");
      continue;
    }
    const auto* a = index.answer(c->post_id);
    if (a == nullptr) {
      report.warnings.push_back("gold comment " + std::to_string(g.comment_id) + " is not on an answer; skipped");
      continue;
    }
    if (a->segments.empty()) {
      report.warnings.push_back("answer " + std::to_string(a->id) + " has no code segment; gold comment " +
                                std::to_string(g.comment_id) + " skipped");
      continue;
    }
    by_answer[a->id].push_back(g);
  }

  for (auto d : kDomains) {
    const bool present = std::any_of(by_answer.begin(), by_answer.end(), [&](const auto& kv) {
      return std::any_of(kv.second.begin(), kv.second.end(), [&](const GoldLabel& g) { return g.domain == d; });
    });
    if (present) report.domains.push_back(d);
  }
  for (const auto& s : sets) {
    for (auto d : report.domains) {
      for (auto c : kInsightful) report.cells.push_back({d, c, s});
    }
  }
  auto cell_of = [&](Domain d, Category c, HeuristicSet s) -> EvalCell& {
    return *std::find_if(report.cells.begin(), report.cells.end(), [&](const EvalCell& x) {
      return x.domain == d && x.category == c && x.set == s;
    });
  };

  std::vector<kernels::RecommendTarget> targets;
  for (const auto& [id, labels] : by_answer) targets.push_back({id, -1});

  for (const auto& s : sets) {
    auto run_cfg = cfg;
    run_cfg.enabled = s;
    run_cfg.validate();
    const auto recs = opts.parallel ? kernels::recommend_batch_omp(index, targets, ctx, run_cfg)
                                    : kernels::recommend_batch_serial(index, targets, ctx, run_cfg);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const auto& labels = by_answer.at(targets[i].answer_id);
      const auto& rec = recs[i].recommendation;
      // first hit position per (domain, category) within this answer
      std::map<std::pair<Domain, Category>, std::optional<int>> first;
      for (const auto& g : labels) {
        auto& cell = cell_of(g.domain, g.category, s);
        ++cell.gold;
        const auto pos = rec.position_of(g.comment_id);
        if (pos) ++cell.retrieved;
        auto& best = first[{g.domain, g.category}];
        if (pos && (!best || *pos < *best)) best = pos;
      }
      for (const auto& [key, pos] : first) {
        auto& cell = cell_of(key.first, key.second, s);
        ++cell.answers;
        if (pos) cell.rr_sum += 1.0 / static_cast<double>(*pos);
      }
    }
  }
  return report;
}

std::string eval_report_tsv(const EvalReport& report) {
  std::ostringstream out;
  out << "heuristics";
  for (auto d : report.domains) {
    for (auto c : kInsightful) {
      const auto prefix = std::string(domain_name(d)) + "_" + category_name(c);
      out << '\t' << prefix << "_CE\t" << prefix << "_recall\t" << prefix << "_MRR";
    }
  }
  for (auto c : kInsightful) out << "\tavg_" << category_name(c) << "_recall\tavg_" << category_name(c) << "_MRR";
  out << '\n';

  for (const auto& s : report.sets) {
    out << '{' << s.str() << '}';
    for (auto d : report.domains) {
      for (auto c : kInsightful) {
        const auto* x = report.cell(d, c, s);
        out << '\t' << x->retrieved << '(' << x->gold << ')';
        out << '\t' << (x->gold == 0 ? "-" : fmt("%.4f", x->recall()));
        out << '\t' << (x->answers == 0 ? "-" : fmt("%.4f", x->mrr()));
      }
    }
    for (auto c : kInsightful) {
      const auto r = report.average_recall(c, s);
      const auto m = report.average_mrr(c, s);
      out << '\t' << (r ? fmt("%.4f", *r) : "-") << '\t' << (m ? fmt("%.4f", *m) : "-");
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace insight
