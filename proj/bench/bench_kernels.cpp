// Serial reference vs OpenMP kernels on a synthetic index.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "insight/kernels.hpp"

using namespace insight;

namespace {

const char* const kWords[] = {"view",   "layout", "list",  "adapter", "string", "buffer", "reader", "stream",
                              "map",    "hash",   "thread", "lock",   "socket", "file",   "intent", "activity",
                              "window", "focus",  "image",  "cursor", "query",  "result", "json",   "parse"};
const char* const kText[] = {"thanks this works",        "great answer, exactly what I needed",
                             "this is wrong and crashes", "@alex you forgot the close call",
                             "use a buffered stream",     "not really a good idea for large files"};

Index synthetic_index(int answers, int comments_per_answer) {
  std::mt19937_64 rng(42);
  Index index;
  std::int64_t comment_id = 1;
  for (int a = 0; a < answers; ++a) {
    QuestionRecord q;
    q.id = 10'000'000 + a;
    q.view_count = 1000;
    q.tags = {"java"};
    q.accepted_answer_id = a + 1;
    index.questions.push_back(q);
    AnswerRecord ans;
    ans.id = a + 1;
    ans.question_id = q.id;
    ans.is_accepted = true;
    CodeSegment seg;
    seg.id = {ans.id, 0};
    seg.line_count = 10;
    for (int t = 0; t < 40; ++t) seg.tokens.add(kWords[rng() % std::size(kWords)]);
    ans.segments.push_back(std::move(seg));
    index.answers.push_back(std::move(ans));
    for (int c = 0; c < comments_per_answer; ++c) {
      DiscussionComment dc;
      dc.id = comment_id++;
      dc.post_id = a + 1;
      dc.author_display_name = "user" + std::to_string(rng() % 6);
      dc.text = std::string(kText[rng() % std::size(kText)]) + " " + kWords[rng() % std::size(kWords)];
      dc.score = static_cast<std::int64_t>(rng() % 12);
      dc.sequence_index = c;
      index.comments.push_back(std::move(dc));
    }
  }
  index.reindex();
  return index;
}

struct Fixture {
  Index index = synthetic_index(2000, 8);
  StopLists stop = StopLists::load(INSIGHT_DATA_DIR, Domain::Any);
  std::unique_ptr<SentimentScorer> scorer = make_sentiment_scorer("lexicon", INSIGHT_DATA_DIR);
  ScoringContext ctx;
  std::vector<const CodeSegment*> segments = index.all_segments();
  std::vector<kernels::RecommendTarget> targets;
  Fixture() {
    ctx.prose_stop = &stop;
    ctx.sentiment = scorer.get();
    for (const auto& a : index.answers) targets.push_back({a.id, -1});
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_SimilarityScanSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::similarity_scan_serial(f.segments[0]->tokens, f.segments));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.segments.size()));
}

void BM_SimilarityScanOmp(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::similarity_scan_omp(f.segments[0]->tokens, f.segments));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.segments.size()));
}

void BM_RecommendBatchSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::recommend_batch_serial(f.index, f.targets, f.ctx, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.targets.size()));
}

void BM_RecommendBatchOmp(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::recommend_batch_omp(f.index, f.targets, f.ctx, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.targets.size()));
}

}  // namespace

BENCHMARK(BM_SimilarityScanSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SimilarityScanOmp)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RecommendBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecommendBatchOmp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
