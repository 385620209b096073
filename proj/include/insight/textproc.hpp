#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace insight {

/// Bag of lowercase tokens with positive counts. Backed by an ordered map so
/// iteration (and therefore serialization) is deterministic.
class TokenMultiset {
 public:
  using Map = std::map<std::string, std::int64_t, std::less<>>;

  TokenMultiset() = default;
  explicit TokenMultiset(Map counts);

  /// Adds `n` occurrences. Empty tokens and non-positive counts are ignored.
  void add(std::string_view token, std::int64_t n = 1);

  std::int64_t count(std::string_view token) const;
  std::int64_t total() const;
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  const Map& counts() const { return counts_; }

  /// Every count multiplied by `factor` (> 0).
  TokenMultiset scaled(std::int64_t factor) const;

  /// Expands the multiset into a sorted token list with repetitions.
  std::vector<std::string> expand() const;

  friend bool operator==(const TokenMultiset&, const TokenMultiset&) = default;

 private:
  Map counts_;
};

enum class TokenizeMode { Code, Prose };

/// Programming domains with dedicated keyword lists.
enum class Domain { Java, Android, CSharp, Any };

std::string_view domain_name(Domain d);
/// Accepts "java", "android", "c#", "csharp", "any"/"all"/"". Throws Error on anything else.
Domain parse_domain(std::string_view name);

struct StopLists {
  std::unordered_set<std::string> english_stop_words;
  std::unordered_set<std::string> programming_keywords;
  std::unordered_set<std::string> punctuation_tokens;

  bool is_stop_word(std::string_view token) const;
  bool is_keyword(std::string_view token) const;
  bool is_punctuation(std::string_view token) const;

  /// Loads `stopwords_en.txt` and the keyword list(s) for `domain` from
  /// `data_dir`. Domain::Any takes the union of all keyword lists.
  static StopLists load(const std::filesystem::path& data_dir, Domain domain);
};

/// Reads a one-token-per-line list. Blank lines and `#` comments are skipped;
/// entries are lowercased.
std::unordered_set<std::string> read_word_list(const std::filesystem::path& path);

/**
 * Splits an identifier into lowercase subtokens.
 *
 * Dotted names are split on `.`; each part is then split at lower-to-upper
 * case transitions, on `_` and on digit runs. For every part the whole part
 * (lowercased) is emitted first, followed by its subtokens when there is more
 * than one, so exact API names stay searchable:
 *
 *   "java.util.HashMap" -> java, util, hashmap, hash, map
 */
std::vector<std::string> split_identifier(std::string_view token);

/// Splits `text` on non-alphanumeric characters, expands every raw token with
/// split_identifier and drops stop words, punctuation, single characters and
/// pure digit runs. Keywords are dropped in Code mode only. No stemming.
TokenMultiset tokenize(std::string_view text, TokenizeMode mode, const StopLists& stop);

/// Inverse document frequencies over a document collection, used only when
/// tf-idf weighting is switched on.
class IdfTable {
 public:
  IdfTable() = default;
  explicit IdfTable(const std::vector<const TokenMultiset*>& documents);

  /// ln(1 + N / df); tokens never seen get the maximum weight ln(1 + N).
  double weight(std::string_view token) const;

 private:
  std::map<std::string, std::int64_t, std::less<>> document_frequency_;
  std::int64_t documents_ = 0;
};

/// dot(a,b) / (|a| |b|) over raw term frequencies, in [0,1]. 0 if either side
/// is empty. Integer-exact up to the final division: each side is first reduced
/// by the gcd of its counts, so uniform integer scaling leaves the result
/// bit-identical.
double cosine_similarity(const TokenMultiset& a, const TokenMultiset& b);

/// tf-idf weighted variant.
double cosine_similarity(const TokenMultiset& a, const TokenMultiset& b, const IdfTable& idf);

}  // namespace insight
