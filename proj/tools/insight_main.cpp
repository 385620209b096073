#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>

#include "insight/config.hpp"
#include "insight/error.hpp"
#include "insight/eval.hpp"
#include "insight/ingest.hpp"
#include "insight/kernels.hpp"
#include "insight/matcher.hpp"
#include "insight/ranker.hpp"
#include "insight/refine.hpp"
#include "insight/topics.hpp"

namespace fs = std::filesystem;
using namespace insight;
using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputNotFound, "input not found: " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + out_path);
  out << text;
}

bool is_jsonl(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".jsonl" || ext == ".json";
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Index open_index(const AppConfig& cfg) {
  Manifest manifest;
  auto index = load_index(cfg.index_dir, &manifest);
  if (index.segment_count() == 0) {
    throw Error(ErrorKind::MissingIndex, "index at " + cfg.index_dir.string() +
                                             " holds no code segments; run `insight ingest` first");
  }
  return index;
}

struct Runtime {
  StopLists prose_stop;
  std::unique_ptr<SentimentScorer> scorer;
  ScoringContext ctx;

  explicit Runtime(const AppConfig& cfg)
      : prose_stop(StopLists::load(cfg.data_dir, Domain::Any)),
        scorer(make_sentiment_scorer(cfg.sentiment_provider, cfg.data_dir, cfg.sentiment)) {
    ctx.prose_stop = &prose_stop;
    ctx.sentiment = scorer.get();
    ctx.pagerank = cfg.pagerank;
  }
};

ojson scores_json(const HeuristicScores& s) {
  return {{"P", s.popularity}, {"WC", s.word_count}, {"R", s.relevance}, {"CR", s.comment_rank}, {"S", s.sentiment}};
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string posts;
  std::string comments;
};

int cmd_ingest(const AppConfig& cfg, const IngestArgs& args, bool as_json) {
  const auto posts_bytes = read_file(args.posts);
  const auto comments_bytes = read_file(args.comments);
  const auto profile = FilterProfile::by_name(cfg.filter_profile);

  std::istringstream posts_in(posts_bytes);
  std::istringstream comments_in(comments_bytes);
  auto posts = is_jsonl(args.posts) ? parse_posts_jsonl(posts_in) : parse_posts(posts_in);
  auto comments = is_jsonl(args.comments) ? parse_comments_jsonl(comments_in) : parse_comments(comments_in);

  IngestStats stats;
  auto index = build_index(std::move(posts), std::move(comments), cfg.data_dir, cfg.code_filter, &stats);
  index = apply_corpus_filters(index, profile);

  Manifest manifest;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(comments_bytes, fnv1a64(posts_bytes))));
  manifest.dump_hash = hash;
  manifest.filter_profile = profile.name;
  manifest.stats = stats;
  manifest.stats.questions = index.questions.size();
  manifest.stats.answers = index.answers.size();
  manifest.stats.segments = index.segment_count();
  manifest.stats.comments = index.comments.size();
  save_index(index, manifest, cfg.index_dir);

  const auto& m = manifest.stats;
  if (as_json) {
    ojson doc = {{"schema_version", 1},
                 {"index", cfg.index_dir.string()},
                 {"profile", profile.name},
                 {"questions", m.questions},
                 {"answers", m.answers},
                 {"segments", m.segments},
                 {"comments", m.comments},
                 {"rejected_segments", m.rejected_segments},
                 {"discarded_percentage", stats.discarded_percentage()},
                 {"malformed_rows", m.malformed_rows},
                 {"orphan_answers", m.orphan_answers}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "index written to " << cfg.index_dir.string() << " (profile " << profile.name << ")\n"
              << "questions  " << m.questions << "\n"
              << "answers    " << m.answers << "\n"
              << "segments   " << m.segments << "\n"
              << "comments   " << m.comments << "\n"
              << "discarded  " << m.rejected_segments << " code blocks ("
              << fixed(stats.discarded_percentage(), 2) << "%)\n";
    if (m.malformed_rows > 0) std::cout << "malformed rows skipped: " << m.malformed_rows << "\n";
    if (m.orphan_answers > 0) std::cout << "orphan answers skipped: " << m.orphan_answers << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct RankArgs {
  std::int64_t answer_id = 0;
  int segment = -1;
  bool explain = false;
  std::string dump_graph;
};

int cmd_rank(const AppConfig& cfg, const RankArgs& args, bool as_json) {
  const auto index = open_index(cfg);
  const Runtime rt(cfg);
  const auto rec = recommend_for_answer(index, args.answer_id, args.segment, rt.ctx, cfg.ranker);

  if (!args.dump_graph.empty()) {
    std::map<std::int64_t, double> ranks;
    for (const auto& s : rec.scores) ranks[s.comment_id] = s.comment_rank;
    write_output(to_dot(rec.graph, &ranks), args.dump_graph);
    if (args.dump_graph == "-") return 0;
  }

  if (args.explain) {
    std::cout << explain_tsv(rec);
    return 0;
  }
  if (as_json) {
    ojson entries = ojson::array();
    for (const auto& e : rec.recommendation.entries) {
      entries.push_back({{"id", e.comment_id},
                         {"frequency", e.frequency},
                         {"tie_break", e.tie_break_trace},
                         {"scores", scores_json(*rec.scores_for(e.comment_id))}});
    }
    ojson lists = ojson::object();
    for (const auto& [h, ids] : rec.lists) lists[std::string(heuristic_symbol(h))] = ids;
    ojson doc = {{"schema_version", 1},
                 {"answer_id", rec.answer_id},
                 {"segment_id", rec.segment.str()},
                 {"candidates", rec.candidates.size()},
                 {"lists", std::move(lists)},
                 {"recommendation", std::move(entries)}};
    std::cout << doc.dump(2, ' ', false, ojson::error_handler_t::replace) << "\n";
    return 0;
  }
  std::cout << "answer " << rec.answer_id << "  segment " << rec.segment.str() << "  candidates "
            << rec.candidates.size() << "\n";
  for (const auto& [h, ids] : rec.lists) {
    std::cout << "  " << heuristic_symbol(h) << ":";
    for (auto id : ids) std::cout << ' ' << id;
    std::cout << "\n";
  }
  int pos = 1;
  for (const auto& e : rec.recommendation.entries) {
    const auto* c = index.comment(e.comment_id);
    std::cout << pos++ << ". [" << e.comment_id << "] freq " << e.frequency << " (" << e.tie_break_trace << ")  "
              << (c != nullptr ? c->text : "") << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct RecommendArgs {
  std::string code;
  std::string domain = "any";
};

int cmd_recommend(const AppConfig& cfg, const RecommendArgs& args, bool as_json) {
  const auto query = read_file(args.code);
  const auto index = open_index(cfg);
  const Runtime rt(cfg);
  auto opts = cfg.matcher;
  opts.domain = parse_domain(args.domain);
  const auto query_stop = StopLists::load(cfg.data_dir, opts.domain);
  const auto rules = RefinementRules::load(cfg.data_dir / "refine");
  const auto result = recommend_for_code(index, query, query_stop, rt.ctx, cfg.ranker, opts, rules);
  std::cout << (as_json ? recommendations_json(result) : recommendations_text(result));
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string gold;
  std::string sets = "table2";
  std::string out;
};

std::vector<HeuristicSet> parse_sets(const std::string& spec) {
  if (spec == "table2") return table2_heuristic_sets();
  std::vector<HeuristicSet> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (!part.empty()) out.push_back(HeuristicSet::parse(part));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "no heuristic sets given");
  return out;
}

int cmd_eval(const AppConfig& cfg, const EvalArgs& args, bool as_json) {
  const auto gold = load_gold(args.gold);
  for (const auto& w : gold.warnings) std::cerr << "warning: " << w << "\n";
  const auto sets = parse_sets(args.sets);
  const auto index = open_index(cfg);
  const Runtime rt(cfg);
  const auto report = evaluate(index, gold.labels, sets, rt.ctx, cfg.ranker);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  if (as_json) {
    ojson cells = ojson::array();
    for (const auto& c : report.cells) {
      cells.push_back({{"heuristics", c.set.str()},
                       {"domain", domain_name(c.domain)},
                       {"category", category_name(c.category)},
                       {"retrieved", c.retrieved},
                       {"gold", c.gold},
                       {"recall", c.recall()},
                       {"answers", c.answers},
                       {"mrr", c.mrr()}});
    }
    ojson doc = {{"schema_version", 1}, {"cells", std::move(cells)}};
    write_output(doc.dump(2) + "\n", args.out);
  } else {
    write_output(eval_report_tsv(report), args.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct TopicsArgs {
  std::string domain = "any";
  std::string out;
};

int cmd_topics(const AppConfig& cfg, const TopicsArgs& args, bool as_json) {
  const auto index = open_index(cfg);
  const auto corpus = build_api_corpus(index, parse_domain(args.domain));
  const auto model = fit_lda(corpus, cfg.topics);
  const auto report = rank_topics(model, cfg.topics);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  if (as_json) {
    ojson topics = ojson::array();
    for (const auto& t : report.topics) {
      topics.push_back({{"topic_id", t.topic_id},
                        {"doc_frequency", t.doc_frequency},
                        {"prominence", t.prominence},
                        {"words", t.top_words}});
    }
    ojson doc = {{"schema_version", 1},
                 {"domain", domain_name(corpus.domain)},
                 {"documents", corpus.documents.size()},
                 {"vocabulary", model.vocabulary.size()},
                 {"dropped_topics", report.dropped_topics},
                 {"topics", std::move(topics)}};
    write_output(doc.dump(2, ' ', false, ojson::error_handler_t::replace) + "\n", args.out);
  } else {
    write_output(topic_report_tsv(report), args.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mines insightful Stack Overflow comments and recommends them for code."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; command-line flags take precedence");

  AppConfig cfg;
  bool as_json = false;
  std::string index_dir = cfg.index_dir.string();
  std::string data_dir = cfg.data_dir.string();

  app.add_option("--index", index_dir, "index directory")->envname("INSIGHT_INDEX_DIR")->capture_default_str();
  app.add_option("--data-dir", data_dir, "word lists and lexicons")->envname("INSIGHT_DATA_DIR")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads, 0 for all cores")->envname("INSIGHT_THREADS");
  app.add_option("--sentiment-provider", cfg.sentiment_provider, "lexicon or none")->capture_default_str();
  app.add_option("--profile", cfg.filter_profile, "corpus filter: none, api-study, gold-style")->capture_default_str();
  app.add_flag("--json", as_json, "machine-readable output");

  app.add_option("--min-lines", cfg.code_filter.min_lines, "code block filter: minimum non-blank lines");
  app.add_option("--vote-min", cfg.ranker.vote_filter_min, "minimum comment score to be a candidate");
  app.add_option("--depth", cfg.ranker.per_list_depth, "per-heuristic list depth");
  app.add_option("--top-k", cfg.ranker.k, "recommended comments per segment");
  app.add_option("--min-words", cfg.ranker.min_words, "drop candidates with fewer words, 0 to disable");
  app.add_flag("--tfidf", cfg.ranker.tfidf, "tf-idf weighted relevance");
  std::string heuristics = cfg.ranker.enabled.str();
  app.add_option("--heuristics", heuristics, "enabled heuristics, e.g. P,R,CR")->capture_default_str();
  app.add_option("--damping", cfg.pagerank.damping, "PageRank damping factor")->capture_default_str();
  app.add_option("--epsilon", cfg.pagerank.epsilon, "PageRank convergence threshold")->capture_default_str();
  app.add_option("--max-iterations", cfg.pagerank.max_iterations, "PageRank iteration cap")->capture_default_str();
  app.add_option("--tau", cfg.matcher.tau, "minimum segment similarity")->capture_default_str();
  app.add_option("--top-n", cfg.matcher.top_n, "matched segments to report")->capture_default_str();
  app.add_option("--k", cfg.topics.k, "number of topics")->capture_default_str();
  app.add_option("--beta", cfg.topics.beta, "topic-word prior")->capture_default_str();
  app.add_option("--iterations", cfg.topics.iterations, "Gibbs sweeps")->capture_default_str();
  app.add_option("--seed", cfg.topics.seed, "sampler seed")->capture_default_str();
  app.add_option("--words", cfg.topics.words_per_topic, "words shown per topic")->capture_default_str();
  app.add_option("--prominence", cfg.topics.prominence_threshold, "minimum topic share")->capture_default_str();

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "parse a dump and write the index");
  ingest->add_option("--posts", ingest_args.posts, "Posts.xml or posts.jsonl")->required();
  ingest->add_option("--comments", ingest_args.comments, "Comments.xml or comments.jsonl")->required();

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank", "rank one answer's discussion");
  rank->add_option("--answer-id", rank_args.answer_id, "answer post id")->required();
  rank->add_option("--segment", rank_args.segment, "segment ordinal, default first");
  rank->add_flag("--explain", rank_args.explain, "TSV of heuristic scores");
  rank->add_option("--dump-graph", rank_args.dump_graph, "write the interaction network as DOT ('-' for stdout)");

  RecommendArgs rec_args;
  auto* recommend = app.add_subcommand("recommend", "recommend comments for a code fragment");
  recommend->add_option("--code", rec_args.code, "source file, '-' for stdin")->required();
  recommend->add_option("--domain", rec_args.domain, "java, android, c# or any")->capture_default_str();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "recall and MRR against gold labels");
  eval->add_option("--gold", eval_args.gold, "CSV comment_id,category,domain")->required();
  eval->add_option("--sets", eval_args.sets, "table2, or sets like 'P;P,R'")->capture_default_str();
  eval->add_option("--out", eval_args.out, "report path, default stdout");

  TopicsArgs topic_args;
  auto* topics = app.add_subcommand("topics", "LDA topics of accepted-answer code");
  topics->add_option("--domain", topic_args.domain, "java, android, c# or any")->capture_default_str();
  topics->add_option("--out", topic_args.out, "report path, default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    cfg.index_dir = index_dir;
    cfg.data_dir = data_dir;
    cfg.ranker.enabled = HeuristicSet::parse(heuristics);
    cfg.validate();
    kernels::set_threads(cfg.threads);

    if (ingest->parsed()) return cmd_ingest(cfg, ingest_args, as_json);
    if (rank->parsed()) return cmd_rank(cfg, rank_args, as_json);
    if (recommend->parsed()) return cmd_recommend(cfg, rec_args, as_json);
    if (eval->parsed()) return cmd_eval(cfg, eval_args, as_json);
    if (topics->parsed()) return cmd_topics(cfg, topic_args, as_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::MissingIndex) std::cerr << "hint: run `insight ingest --posts ... --comments ...`\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
