#include "insight/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "insight/error.hpp"

namespace insight {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

std::unordered_set<std::string> SentimentLexicon::default_negators() {
  return {"not",    "no",     "never", "none",    "nobody",  "nothing", "neither", "nor",
          "cannot", "cant",   "dont",  "doesnt",  "didnt",   "isnt",    "wasnt",   "wont",
          "wouldnt", "shouldnt", "couldnt", "arent", "without", "hardly", "barely"};
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputNotFound, "sentiment lexicon not found: " + path.string());
  SentimentLexicon lex;
  lex.negators = default_negators();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected word<TAB>valence");
    }
    auto word = trim(std::string_view(line).substr(0, tab));
    auto value = trim(std::string_view(line).substr(tab + 1));
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (word.empty() || ec != std::errc() || ptr != value.data() + value.size() || v < -5 || v > 5) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": bad entry");
    }
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    lex.entries[word] = v;
  }
  return lex;
}

bool SentimentLexicon::is_negator(std::string_view word) const {
  return negators.contains(std::string(word)) || word.ends_with("n't");
}

int SentimentLexicon::valence(std::string_view word) const {
  auto it = entries.find(std::string(word));
  return it == entries.end() ? 0 : it->second;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool in_code = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    cur.push_back(c);
    if (c == '`') {
      in_code = !in_code;
      continue;
    }
    if (in_code || (c != '.' && c != '!' && c != '?')) continue;
    if (i + 1 == text.size() || is_space(text[i + 1])) {
      auto s = trim(cur);
      if (!s.empty()) out.push_back(std::move(s));
      cur.clear();
    }
  }
  auto s = trim(cur);
  if (!s.empty()) out.push_back(std::move(s));
  return out;
}

std::vector<std::string> sentiment_words(std::string_view sentence) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
    while (!cur.empty() && cur.back() == '\'' ) cur.pop_back();
    if (!cur.empty()) words.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    auto u = static_cast<unsigned char>(sentence[i]);
    if (std::isalnum(u) || u == '\'') {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (u == 0xE2 && i + 2 < sentence.size() && static_cast<unsigned char>(sentence[i + 1]) == 0x80 &&
               static_cast<unsigned char>(sentence[i + 2]) == 0x99) {
      cur.push_back('\'');  // U+2019 right single quotation mark
      i += 2;
    } else {
      flush();
    }
  }
  flush();
  return words;
}

int bucket_raw_score(int raw, const SentimentBuckets& b) {
  if (raw >= b.strong) return 2;
  if (raw >= b.weak) return 1;
  if (raw <= -b.strong) return -2;
  if (raw <= -b.weak) return -1;
  return 0;
}

int score_sentence(std::string_view sentence, const SentimentLexicon& lex, const SentimentBuckets& buckets) {
  const auto words = sentiment_words(sentence);
  int raw = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    int v = lex.valence(words[i]);
    if (v == 0) continue;
    const std::size_t window = static_cast<std::size_t>(std::max(0, buckets.negation_window));
    for (std::size_t k = i > window ? i - window : 0; k < i; ++k) {
      if (lex.is_negator(words[k])) {
        v = -v;
        break;
      }
    }
    raw += v;
  }
  return bucket_raw_score(raw, buckets);
}

CommentSentiment score_comment(std::string_view text, const SentimentLexicon& lex,
                               const SentimentBuckets& buckets) {
  CommentSentiment out;
  for (const auto& s : split_sentences(text)) {
    out.sentence_scores.push_back(score_sentence(s, lex, buckets));
    out.total += out.sentence_scores.back();
  }
  return out;
}

std::unique_ptr<SentimentScorer> make_sentiment_scorer(std::string_view provider,
                                                       const std::filesystem::path& data_dir,
                                                       const SentimentBuckets& buckets) {
  if (provider == "lexicon") {
    return std::make_unique<LexiconSentimentScorer>(SentimentLexicon::load(data_dir / "sentiment_lexicon.txt"),
                                                    buckets);
  }
  if (provider == "none") return std::make_unique<NeutralSentimentScorer>();
  throw Error(ErrorKind::Config, "unknown sentiment provider: " + std::string(provider));
}

}  // namespace insight
