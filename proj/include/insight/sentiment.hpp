#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace insight {

/// Word valences in [-5, +5] plus the negator set.
struct SentimentLexicon {
  std::unordered_map<std::string, int> entries;
  std::unordered_set<std::string> negators;

  /// Reads `word<TAB>valence` lines (AFINN layout). Default negators are
  /// installed; words ending in "n't" always negate.
  static SentimentLexicon load(const std::filesystem::path& path);
  static std::unordered_set<std::string> default_negators();

  bool is_negator(std::string_view word) const;
  /// 0 for unknown words.
  int valence(std::string_view word) const;
};

/// Raw-valence thresholds for the five sentence classes.
struct SentimentBuckets {
  int weak = 1;    // |raw| >= weak -> +-1
  int strong = 4;  // |raw| >= strong -> +-2
  int negation_window = 3;
};

struct CommentSentiment {
  std::vector<int> sentence_scores;  // each in [-2, +2]
  int total = 0;
};

/// Splits on `.`, `!` or `?` followed by whitespace or end of text. Text
/// inside backticks never splits. Sentences keep their terminator and are
/// trimmed; empty ones are dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Lowercased word tokens; apostrophes inside words are kept ("doesn't").
std::vector<std::string> sentiment_words(std::string_view sentence);

/// Sum of word valences, a word's sign flipped when a negator occurs among the
/// `negation_window` preceding words, then bucketed into [-2, +2].
int score_sentence(std::string_view sentence, const SentimentLexicon& lex,
                   const SentimentBuckets& buckets = {});

int bucket_raw_score(int raw, const SentimentBuckets& buckets = {});

CommentSentiment score_comment(std::string_view text, const SentimentLexicon& lex,
                               const SentimentBuckets& buckets = {});

/// Anything that maps comment text to an integer polarity can drive the S
/// heuristic; the ranker only consumes the integer.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual int score(std::string_view comment_text) const = 0;
  virtual std::string_view name() const = 0;
};

class LexiconSentimentScorer final : public SentimentScorer {
 public:
  explicit LexiconSentimentScorer(SentimentLexicon lex, SentimentBuckets buckets = {})
      : lex_(std::move(lex)), buckets_(buckets) {}

  int score(std::string_view text) const override { return score_comment(text, lex_, buckets_).total; }
  std::string_view name() const override { return "lexicon"; }

  const SentimentLexicon& lexicon() const { return lex_; }

 private:
  SentimentLexicon lex_;
  SentimentBuckets buckets_;
};

/// Scores every comment 0, which removes S from the fusion in practice.
class NeutralSentimentScorer final : public SentimentScorer {
 public:
  int score(std::string_view) const override { return 0; }
  std::string_view name() const override { return "none"; }
};

/// "lexicon" (reads data_dir/sentiment_lexicon.txt) or "none".
std::unique_ptr<SentimentScorer> make_sentiment_scorer(std::string_view provider,
                                                       const std::filesystem::path& data_dir,
                                                       const SentimentBuckets& buckets = {});

}  // namespace insight
