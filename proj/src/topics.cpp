#include "insight/topics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "insight/error.hpp"

namespace insight {

ApiCorpus build_api_corpus(const Index& index, Domain domain) {
  ApiCorpus corpus;
  corpus.domain = domain;
  for (const auto& a : index.answers) {
    if (!a.is_accepted) continue;
    const auto* q = index.question(a.question_id);
    if (q == nullptr) continue;
    if (domain != Domain::Any) {
      const auto d = domain_of(*q);
      if (d != domain) continue;
    }
    TokenMultiset all;
    for (const auto& s : a.segments) {
      for (const auto& [tok, n] : s.tokens.counts()) all.add(tok, n);
    }
    if (all.empty()) continue;
    corpus.documents.push_back({a.id, all.expand()});
  }
  return corpus;
}

void TopicModelConfig::validate() const {
  if (k < 1) throw Error(ErrorKind::Config, "K must be >= 1");
  if (!(beta > 0.0)) throw Error(ErrorKind::Config, "beta must be positive");
  if (iterations < 0) throw Error(ErrorKind::Config, "iterations must be >= 0");
  if (words_per_topic < 1) throw Error(ErrorKind::Config, "words_per_topic must be >= 1");
  if (top_topics_per_doc < 1) throw Error(ErrorKind::Config, "top_topics_per_doc must be >= 1");
  if (prominence_threshold < 0.0) throw Error(ErrorKind::Config, "prominence threshold must be >= 0");
}

std::vector<double> TopicModel::doc_topic_distribution(std::size_t doc) const {
  const auto& row = doc_topic_counts.at(doc);
  const double n = static_cast<double>(std::accumulate(row.begin(), row.end(), std::int64_t{0}));
  std::vector<double> out(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (int t = 0; t < k; ++t) {
    out[static_cast<std::size_t>(t)] = (static_cast<double>(row[static_cast<std::size_t>(t)]) + alpha) / (n + k * alpha);
    sum += out[static_cast<std::size_t>(t)];
  }
  for (auto& v : out) v /= sum;
  return out;
}

std::vector<double> TopicModel::topic_word_distribution(int topic) const {
  const auto& row = topic_word_counts.at(static_cast<std::size_t>(topic));
  const double v = static_cast<double>(vocabulary.size());
  const double n = static_cast<double>(topic_totals.at(static_cast<std::size_t>(topic)));
  std::vector<double> out(row.size());
  for (std::size_t w = 0; w < row.size(); ++w) out[w] = (static_cast<double>(row[w]) + beta) / (n + v * beta);
  return out;
}

std::int64_t TopicModel::total_assignments() const {
  return std::accumulate(topic_totals.begin(), topic_totals.end(), std::int64_t{0});
}

GibbsSampler::GibbsSampler(const ApiCorpus& corpus, const TopicModelConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate();
  if (corpus.documents.empty()) throw Error(ErrorKind::Config, "topic corpus is empty");

  std::map<std::string, int> ids;
  for (const auto& d : corpus.documents) {
    for (const auto& t : d.tokens) ids.emplace(t, 0);
  }
  int next = 0;
  for (auto& [word, id] : ids) {
    id = next++;
    vocab_.push_back(word);
  }
  if (cfg_.k > static_cast<int>(vocab_.size())) {
    throw Error(ErrorKind::Config, "K (" + std::to_string(cfg_.k) + ") exceeds vocabulary size (" +
                                       std::to_string(vocab_.size()) + ")");
  }

  const auto k = static_cast<std::size_t>(cfg_.k);
  nkw_.assign(k, std::vector<std::int64_t>(vocab_.size(), 0));
  nk_.assign(k, 0);
  weights_.resize(k);
  for (const auto& d : corpus.documents) {
    answer_ids_.push_back(d.answer_id);
    std::vector<int> w, z;
    std::vector<std::int64_t> counts(k, 0);
    for (const auto& t : d.tokens) {
      const int word = ids.at(t);
      const int topic = std::min(cfg_.k - 1, static_cast<int>(uniform() * cfg_.k));
      w.push_back(word);
      z.push_back(topic);
      ++counts[static_cast<std::size_t>(topic)];
      ++nkw_[static_cast<std::size_t>(topic)][static_cast<std::size_t>(word)];
      ++nk_[static_cast<std::size_t>(topic)];
      ++token_count_;
    }
    words_.push_back(std::move(w));
    topics_.push_back(std::move(z));
    ndk_.push_back(std::move(counts));
  }
}

double GibbsSampler::uniform() {
  // 53 random mantissa bits; portable unlike std::uniform_real_distribution.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void GibbsSampler::sweep() {
  const double alpha = cfg_.alpha();
  const double beta = cfg_.beta;
  const double vbeta = beta * static_cast<double>(vocab_.size());
  const auto k = static_cast<std::size_t>(cfg_.k);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    auto& ndk = ndk_[d];
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto w = static_cast<std::size_t>(words_[d][i]);
      auto old = static_cast<std::size_t>(topics_[d][i]);
      --ndk[old];
      --nkw_[old][w];
      --nk_[old];

      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        total += (static_cast<double>(ndk[t]) + alpha) * (static_cast<double>(nkw_[t][w]) + beta) /
                 (static_cast<double>(nk_[t]) + vbeta);
        weights_[t] = total;
      }
      const double u = uniform() * total;
      auto chosen = static_cast<std::size_t>(std::upper_bound(weights_.begin(), weights_.end(), u) - weights_.begin());
      if (chosen >= k) chosen = k - 1;

      topics_[d][i] = static_cast<int>(chosen);
      ++ndk[chosen];
      ++nkw_[chosen][w];
      ++nk_[chosen];
    }
  }
  ++sweeps_;
}

std::int64_t GibbsSampler::assigned_tokens() const {
  return std::accumulate(nk_.begin(), nk_.end(), std::int64_t{0});
}

bool GibbsSampler::counts_consistent() const {
  const auto k = static_cast<std::size_t>(cfg_.k);
  std::vector<std::vector<std::int64_t>> nkw(k, std::vector<std::int64_t>(vocab_.size(), 0));
  std::vector<std::int64_t> nk(k, 0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    std::vector<std::int64_t> ndk(k, 0);
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto t = static_cast<std::size_t>(topics_[d][i]);
      ++ndk[t];
      ++nkw[t][static_cast<std::size_t>(words_[d][i])];
      ++nk[t];
    }
    if (ndk != ndk_[d]) return false;
  }
  return nkw == nkw_ && nk == nk_;
}

TopicModel GibbsSampler::model() const {
  TopicModel m;
  m.k = cfg_.k;
  m.alpha = cfg_.alpha();
  m.beta = cfg_.beta;
  m.vocabulary = vocab_;
  m.topic_word_counts = nkw_;
  m.doc_topic_counts = ndk_;
  m.topic_totals = nk_;
  m.doc_answer_ids = answer_ids_;
  const double n = static_cast<double>(token_count_);
  for (std::size_t t = 0; t < nk_.size(); ++t) {
    std::vector<std::size_t> order(vocab_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& row = nkw_[t];
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return row[a] > row[b]; });
    std::vector<std::string> words;
    for (auto w : order) {
      if (static_cast<int>(words.size()) == cfg_.words_per_topic || row[w] == 0) break;
      words.push_back(vocab_[w]);
    }
    m.top_words.push_back(std::move(words));
    m.prominence.push_back(n == 0.0 ? 0.0 : static_cast<double>(nk_[t]) / n);
  }
  return m;
}

TopicModel fit_lda(const ApiCorpus& corpus, const TopicModelConfig& cfg) {
  GibbsSampler sampler(corpus, cfg);
  for (int i = 0; i < cfg.iterations; ++i) sampler.sweep();
  return sampler.model();
}

TopicReport rank_topics(const TopicModel& model, const TopicModelConfig& cfg) {
  TopicReport report;
  std::vector<bool> alive(static_cast<std::size_t>(model.k));
  for (int t = 0; t < model.k; ++t) {
    alive[static_cast<std::size_t>(t)] = model.prominence[static_cast<std::size_t>(t)] >= cfg.prominence_threshold;
    if (!alive[static_cast<std::size_t>(t)]) ++report.dropped_topics;
  }
  std::vector<std::int64_t> freq(static_cast<std::size_t>(model.k), 0);
  for (const auto& row : model.doc_topic_counts) {
    std::vector<int> present;
    for (int t = 0; t < model.k; ++t) {
      if (alive[static_cast<std::size_t>(t)] && row[static_cast<std::size_t>(t)] > 0) present.push_back(t);
    }
    std::stable_sort(present.begin(), present.end(), [&](int a, int b) {
      return row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(b)];
    });
    const auto take = std::min<std::size_t>(present.size(), static_cast<std::size_t>(cfg.top_topics_per_doc));
    for (std::size_t i = 0; i < take; ++i) ++freq[static_cast<std::size_t>(present[i])];
  }
  for (int t = 0; t < model.k; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    if (!alive[ut]) continue;
    report.topics.push_back({t, freq[ut], model.prominence[ut], model.top_words[ut]});
  }
  std::stable_sort(report.topics.begin(), report.topics.end(),
                   [](const RankedTopic& a, const RankedTopic& b) { return a.doc_frequency > b.doc_frequency; });
  if (report.topics.empty()) {
    report.warnings.push_back("no topic reaches the prominence threshold; report is empty");
  }
  return report;
}

std::string topic_report_tsv(const TopicReport& report) {
  std::ostringstream out;
  out << "rank\ttopic_id\tdoc_frequency\twords\n";
  int rank = 1;
  for (const auto& t : report.topics) {
    out << rank++ << '\t' << t.topic_id << '\t' << t.doc_frequency;
    for (const auto& w : t.top_words) out << '\t' << w;
    out << '\n';
  }
  return out.str();
}

}  // namespace insight
