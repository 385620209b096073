#include "insight/refine.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <vector>

#include "insight/error.hpp"

namespace insight {

namespace {

constexpr std::string_view kLeadingPunct = "\"'([{<*";
constexpr std::string_view kTrailingPunct = ".,;:!?\"')]}>*";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Curly apostrophes are folded to ASCII for table lookups.
std::string fold_apostrophes(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 && static_cast<unsigned char>(s[i + 2]) == 0x99) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string carry_case(std::string_view original, std::string replacement) {
  if (!original.empty() && !replacement.empty() && is_upper(original.front())) {
    replacement.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement.front())));
  }
  return replacement;
}

bool identifier_like(std::string_view chunk) {
  if (chunk.find("()") != std::string_view::npos) return true;
  for (std::size_t i = 1; i + 1 < chunk.size(); ++i) {
    if ((chunk[i] == '.' || chunk[i] == '_') && is_alnum(chunk[i - 1]) && is_alnum(chunk[i + 1])) return true;
  }
  for (std::size_t i = 1; i < chunk.size(); ++i) {
    if (is_lower(chunk[i - 1]) && is_upper(chunk[i])) return true;
  }
  return false;
}

struct Chunk {
  std::string_view lead, core, trail;
};

Chunk split_chunk(std::string_view w) {
  Chunk c;
  std::size_t b = 0;
  while (b < w.size() && kLeadingPunct.find(w[b]) != std::string_view::npos) ++b;
  std::size_t e = w.size();
  while (e > b && kTrailingPunct.find(w[e - 1]) != std::string_view::npos) --e;
  c.lead = w.substr(0, b);
  c.core = w.substr(b, e - b);
  c.trail = w.substr(e);
  return c;
}

// A piece of the comment: prose is rewritten, backtick code spans are copied.
struct Piece {
  std::string text;
  bool code = false;
};

std::vector<Piece> split_code_spans(std::string_view text) {
  std::vector<Piece> pieces;
  std::string prose;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '`') {
      auto close = text.find('`', i + 1);
      if (close != std::string_view::npos) {
        if (!prose.empty()) pieces.push_back({std::move(prose), false});
        prose.clear();
        pieces.push_back({std::string(text.substr(i, close - i + 1)), true});
        i = close + 1;
        continue;
      }
    }
    prose.push_back(text[i]);
    ++i;
  }
  if (!prose.empty()) pieces.push_back({std::move(prose), false});
  return pieces;
}

bool ends_sentence(std::string_view before) {
  std::size_t e = before.size();
  while (e > 0 && is_space(before[e - 1])) --e;
  if (e == 0) return true;
  const char c = before[e - 1];
  return c == '.' || c == '!' || c == '?';
}

// Rewrites the prose of every word chunk with `fn(core, sentence_start)`;
// nullopt keeps the chunk. Whitespace is copied verbatim.
template <typename Fn>
void rewrite_words(std::vector<Piece>& pieces, Fn fn) {
  std::string before;  // text emitted so far, for sentence-start detection
  for (auto& p : pieces) {
    if (p.code) {
      before += p.text;
      continue;
    }
    std::string out;
    std::string_view s = p.text;
    std::size_t i = 0;
    while (i < s.size()) {
      if (is_space(s[i])) {
        out.push_back(s[i++]);
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j])) ++j;
      auto word = s.substr(i, j - i);
      std::optional<std::string> replaced;
      if (!identifier_like(word)) {
        auto c = split_chunk(word);
        if (!c.core.empty()) {
          if (auto r = fn(c.core, ends_sentence(before + out + std::string(c.lead)))) {
            replaced = std::string(c.lead) + *r + std::string(c.trail);
          }
        }
      }
      out += replaced ? *replaced : std::string(word);
      i = j;
    }
    before += out;
    p.text = std::move(out);
  }
}

bool is_mention(std::string_view word) {
  return word.size() > 1 && word[0] == '@' && (is_alnum(word[1]) || static_cast<unsigned char>(word[1]) >= 0x80);
}

void drop_mentions(std::vector<Piece>& pieces) {
  for (auto& p : pieces) {
    if (p.code) continue;
    std::string out;
    std::string_view s = p.text;
    std::size_t i = 0;
    while (i < s.size()) {
      if (is_space(s[i])) {
        out.push_back(s[i++]);
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j])) ++j;
      auto word = s.substr(i, j - i);
      if (!is_mention(word)) {
        out += word;
        i = j;
        continue;
      }
      // Name characters, then an optional ',' or ':'; anything after is kept.
      std::size_t k = 1;
      while (k < word.size() && (is_alnum(word[k]) || word[k] == '_' || word[k] == '-' ||
                                 static_cast<unsigned char>(word[k]) >= 0x80 ||
                                 (word[k] == '.' && k + 1 < word.size() && is_alnum(word[k + 1])))) {
        ++k;
      }
      if (k < word.size() && (word[k] == ',' || word[k] == ':')) ++k;
      auto rest = word.substr(k);
      if (rest.empty()) {
        while (j < s.size() && is_space(s[j])) ++j;  // swallow the gap after the mention
        if (j == s.size()) {
          while (!out.empty() && is_space(out.back())) out.pop_back();
        }
      } else {
        while (!out.empty() && is_space(out.back())) out.pop_back();
        out += rest;
      }
      i = j;
    }
    p.text = std::move(out);
  }
}

const std::array<std::string_view, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
const std::array<std::string_view, 10> kTens = {"",      "",      "twenty",  "thirty", "forty",
                                                "fifty", "sixty", "seventy", "eighty", "ninety"};

std::optional<int> small_integer(std::string_view core) {
  if (core.empty() || core.size() > 3) return std::nullopt;
  for (char c : core) {
    if (!is_digit(c)) return std::nullopt;
  }
  if (core.size() > 1 && core[0] == '0') return std::nullopt;
  int v = 0;
  for (char c : core) v = v * 10 + (c - '0');
  return v;
}

std::map<std::string, std::string, std::less<>> read_table(const std::filesystem::path& path) {
  std::map<std::string, std::string, std::less<>> table;
  std::ifstream in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected word<TAB>replacement");
    }
    table[to_lower(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return table;
}

}  // namespace

RefinementRules RefinementRules::defaults() {
  RefinementRules r;
  r.pronoun_map = {{"you", "one"},   {"your", "one's"}, {"yours", "one's"}, {"i", "one"},
                   {"my", "one's"},  {"mine", "one's"}, {"me", "one"},      {"yourself", "oneself"},
                   {"myself", "oneself"}};
  r.contraction_map = {
      {"can't", "can not"},      {"cannot", "can not"},      {"won't", "will not"},
      {"don't", "do not"},       {"doesn't", "does not"},    {"didn't", "did not"},
      {"isn't", "is not"},       {"aren't", "are not"},      {"wasn't", "was not"},
      {"weren't", "were not"},   {"haven't", "have not"},    {"hasn't", "has not"},
      {"hadn't", "had not"},     {"wouldn't", "would not"},  {"shouldn't", "should not"},
      {"couldn't", "could not"}, {"mustn't", "must not"},    {"needn't", "need not"},
      {"shan't", "shall not"},   {"ain't", "is not"},        {"it's", "it is"},
      {"that's", "that is"},     {"there's", "there is"},    {"here's", "here is"},
      {"what's", "what is"},     {"let's", "let us"},        {"i'm", "I am"},
      {"i've", "I have"},        {"i'll", "I will"},         {"i'd", "I would"},
      {"you're", "you are"},     {"you've", "you have"},     {"you'll", "you will"},
      {"you'd", "you would"},    {"we're", "we are"},        {"we've", "we have"},
      {"they're", "they are"},   {"they've", "they have"},   {"it'll", "it will"},
      {"that'll", "that will"},  {"wanna", "want to"},       {"gonna", "going to"}};
  return r;
}

RefinementRules RefinementRules::load(const std::filesystem::path& dir) {
  auto r = defaults();
  if (std::filesystem::exists(dir / "pronouns.txt")) r.pronoun_map = read_table(dir / "pronouns.txt");
  if (std::filesystem::exists(dir / "contractions.txt")) r.contraction_map = read_table(dir / "contractions.txt");
  return r;
}

std::string number_to_words(int n) {
  if (n < 0 || n > 999) throw Error(ErrorKind::InvalidInput, "number out of range: " + std::to_string(n));
  if (n < 20) return std::string(kOnes[static_cast<std::size_t>(n)]);
  if (n < 100) {
    std::string out(kTens[static_cast<std::size_t>(n / 10)]);
    if (n % 10 != 0) out += "-" + std::string(kOnes[static_cast<std::size_t>(n % 10)]);
    return out;
  }
  std::string out = std::string(kOnes[static_cast<std::size_t>(n / 100)]) + " hundred";
  if (n % 100 != 0) out += " " + number_to_words(n % 100);
  return out;
}

std::string refine_comment(std::string_view text, const RefinementRules& rules) {
  auto pieces = split_code_spans(text);

  drop_mentions(pieces);

  rewrite_words(pieces, [&](std::string_view core, bool) -> std::optional<std::string> {
    auto it = rules.contraction_map.find(to_lower(fold_apostrophes(core)));
    if (it == rules.contraction_map.end()) return std::nullopt;
    return carry_case(core, it->second);
  });

  rewrite_words(pieces, [&](std::string_view core, bool sentence_start) -> std::optional<std::string> {
    const auto key = to_lower(core);
    auto it = rules.pronoun_map.find(key);
    if (it == rules.pronoun_map.end()) return std::nullopt;
    if (key == "i") {
      auto r = it->second;
      if (sentence_start && !r.empty()) r.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(r.front())));
      return r;
    }
    return carry_case(core, it->second);
  });

  rewrite_words(pieces, [](std::string_view core, bool) -> std::optional<std::string> {
    if (auto v = small_integer(core)) return number_to_words(*v);
    return std::nullopt;
  });

  std::string out;
  for (const auto& p : pieces) out += p.text;
  auto b = out.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = out.find_last_not_of(" \t\r\n");
  return out.substr(b, e - b + 1);
}

}  // namespace insight
