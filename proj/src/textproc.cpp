#include "insight/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>

#include "insight/error.hpp"

namespace insight {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    auto c = static_cast<unsigned char>(ch);
    if (is_upper(c)) ch = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return is_digit(static_cast<unsigned char>(c));
  });
}

// Camel-case / underscore / digit split of a dot-free part, original case.
std::vector<std::string> split_part(std::string_view part) {
  std::vector<std::string> pieces;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) pieces.push_back(to_lower(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < part.size(); ++i) {
    auto c = static_cast<unsigned char>(part[i]);
    if (c == '_' || is_digit(c)) {
      flush();
      continue;
    }
    if (is_upper(c) && i > 0 && is_lower(static_cast<unsigned char>(part[i - 1]))) flush();
    cur.push_back(static_cast<char>(c));
  }
  flush();
  return pieces;
}

std::int64_t counts_gcd(const TokenMultiset& m) {
  std::int64_t g = 0;
  for (const auto& [tok, n] : m.counts()) g = std::gcd(g, n);
  return g == 0 ? 1 : g;
}

}  // namespace

TokenMultiset::TokenMultiset(Map counts) {
  for (auto& [tok, n] : counts) add(tok, n);
}

void TokenMultiset::add(std::string_view token, std::int64_t n) {
  if (token.empty() || n <= 0) return;
  auto it = counts_.find(token);
  if (it == counts_.end()) {
    counts_.emplace(std::string(token), n);
  } else {
    it->second += n;
  }
}

std::int64_t TokenMultiset::count(std::string_view token) const {
  auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t TokenMultiset::total() const {
  std::int64_t t = 0;
  for (const auto& [tok, n] : counts_) t += n;
  return t;
}

TokenMultiset TokenMultiset::scaled(std::int64_t factor) const {
  TokenMultiset out;
  for (const auto& [tok, n] : counts_) out.add(tok, n * factor);
  return out;
}

std::vector<std::string> TokenMultiset::expand() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(total()));
  for (const auto& [tok, n] : counts_) {
    for (std::int64_t i = 0; i < n; ++i) out.push_back(tok);
  }
  return out;
}

std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::Java:
      return "java";
    case Domain::Android:
      return "android";
    case Domain::CSharp:
      return "csharp";
    case Domain::Any:
      return "any";
  }
  return "any";
}

Domain parse_domain(std::string_view name) {
  auto n = to_lower(name);
  if (n == "java") return Domain::Java;
  if (n == "android") return Domain::Android;
  if (n == "c#" || n == "csharp" || n == "cs") return Domain::CSharp;
  if (n.empty() || n == "any" || n == "all") return Domain::Any;
  throw Error(ErrorKind::InvalidInput, "unknown domain: " + std::string(name));
}

bool StopLists::is_stop_word(std::string_view token) const {
  return english_stop_words.contains(to_lower(token));
}
bool StopLists::is_keyword(std::string_view token) const {
  return programming_keywords.contains(to_lower(token));
}
bool StopLists::is_punctuation(std::string_view token) const {
  return punctuation_tokens.contains(std::string(token));
}

std::unordered_set<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputNotFound, "word list not found: " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    words.insert(to_lower(std::string_view(line).substr(b, e - b + 1)));
  }
  return words;
}

StopLists StopLists::load(const std::filesystem::path& data_dir, Domain domain) {
  StopLists s;
  s.english_stop_words = read_word_list(data_dir / "stopwords_en.txt");
  std::vector<std::string_view> lists;
  if (domain == Domain::Any) {
    lists = {"java", "android", "csharp"};
  } else {
    lists = {domain_name(domain)};
  }
  for (auto name : lists) {
    auto words = read_word_list(data_dir / ("keywords_" + std::string(name) + ".txt"));
    s.programming_keywords.insert(words.begin(), words.end());
  }
  for (std::string_view p : {"(", ")", "[", "]", "{", "}", "?", ";", ":", ",", ".", "!", "<",
                             ">", "=", "+", "-", "*", "/", "&", "|", "\"", "'", "`", "@", "#",
                             "$", "%", "^", "~", "\\"}) {
    s.punctuation_tokens.emplace(p);
  }
  return s;
}

std::vector<std::string> split_identifier(std::string_view token) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= token.size()) {
    auto dot = token.find('.', start);
    auto part = token.substr(start, dot == std::string_view::npos ? token.size() - start : dot - start);
    if (!part.empty()) {
      auto whole = to_lower(part);
      auto pieces = split_part(part);
      const bool split = pieces.size() > 1 || (pieces.size() == 1 && pieces[0] != whole);
      out.push_back(std::move(whole));
      if (split) out.insert(out.end(), pieces.begin(), pieces.end());
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

TokenMultiset tokenize(std::string_view text, TokenizeMode mode, const StopLists& stop) {
  TokenMultiset out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      for (auto& tok : split_identifier(text.substr(i, j - i))) {
        if (tok.size() < 2 || all_digits(tok)) continue;
        if (stop.is_stop_word(tok) || stop.is_punctuation(tok)) continue;
        if (mode == TokenizeMode::Code && stop.is_keyword(tok)) continue;
        out.add(tok);
      }
    }
    i = j;
  }
  return out;
}

IdfTable::IdfTable(const std::vector<const TokenMultiset*>& documents)
    : documents_(static_cast<std::int64_t>(documents.size())) {
  for (const auto* doc : documents) {
    for (const auto& [tok, n] : doc->counts()) ++document_frequency_[tok];
  }
}

double IdfTable::weight(std::string_view token) const {
  auto it = document_frequency_.find(token);
  double df = it == document_frequency_.end() ? 0.0 : static_cast<double>(it->second);
  if (df == 0.0) return std::log1p(static_cast<double>(documents_));
  return std::log1p(static_cast<double>(documents_) / df);
}

double cosine_similarity(const TokenMultiset& a, const TokenMultiset& b) {
  if (a.empty() || b.empty()) return 0.0;
  const std::int64_t ga = counts_gcd(a);
  const std::int64_t gb = counts_gcd(b);
  // Exact integer accumulation; counts are small enough for __int128 headroom.
  __int128 dot = 0, na = 0, nb = 0;
  for (const auto& [tok, n] : a.counts()) {
    const __int128 x = n / ga;
    na += x * x;
    const auto m = b.count(tok);
    if (m > 0) dot += x * (m / gb);
  }
  for (const auto& [tok, n] : b.counts()) {
    const __int128 y = n / gb;
    nb += y * y;
  }
  if (dot == 0) return 0.0;
  const long double denom = std::sqrt(static_cast<long double>(na) * static_cast<long double>(nb));
  const double cos = static_cast<double>(static_cast<long double>(dot) / denom);
  return std::clamp(cos, 0.0, 1.0);
}

double cosine_similarity(const TokenMultiset& a, const TokenMultiset& b, const IdfTable& idf) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0, na = 0, nb = 0;
  for (const auto& [tok, n] : a.counts()) {
    const double w = idf.weight(tok);
    const double x = static_cast<double>(n) * w;
    na += x * x;
    const auto m = b.count(tok);
    if (m > 0) dot += x * static_cast<double>(m) * w;
  }
  for (const auto& [tok, n] : b.counts()) {
    const double y = static_cast<double>(n) * idf.weight(tok);
    nb += y * y;
  }
  if (dot == 0.0 || na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

}  // namespace insight
