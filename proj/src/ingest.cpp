#include "insight/ingest.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>

#include "insight/error.hpp"

namespace insight {

using json = nlohmann::json;

namespace {

using Attributes = std::map<std::string, std::string, std::less<>>;

// One expat parser reused across rows; each dump line is parsed as its own
// document so a broken row does not poison the rest of the stream.
class RowParser {
 public:
  RowParser() : parser_(XML_ParserCreate("UTF-8"), &XML_ParserFree) {}

  std::optional<Attributes> parse(std::string_view line) {
    XML_ParserReset(parser_.get(), "UTF-8");
    Attributes attrs;
    bool seen_row = false;
    Context ctx{&attrs, &seen_row};
    XML_SetUserData(parser_.get(), &ctx);
    XML_SetStartElementHandler(parser_.get(), &RowParser::on_start);
    const auto ok = XML_Parse(parser_.get(), line.data(), static_cast<int>(line.size()), XML_TRUE);
    if (ok != XML_STATUS_OK || !seen_row) return std::nullopt;
    return attrs;
  }

 private:
  struct Context {
    Attributes* attrs;
    bool* seen_row;
  };

  static void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
    auto* ctx = static_cast<Context*>(user);
    if (std::string_view(name) != "row" || *ctx->seen_row) return;
    *ctx->seen_row = true;
    for (int i = 0; atts[i] != nullptr; i += 2) ctx->attrs->emplace(atts[i], atts[i + 1]);
  }

  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser_;
};

std::optional<std::int64_t> to_int(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> int_attr(const Attributes& a, std::string_view key) {
  auto it = a.find(key);
  if (it == a.end()) return std::nullopt;
  return to_int(it->second);
}

std::string str_attr(const Attributes& a, std::string_view key) {
  auto it = a.find(key);
  return it == a.end() ? std::string() : it->second;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// "<java><android>" (classic dumps) or "|java|android|" (newer dumps).
std::vector<std::string> parse_tags(std::string_view raw) {
  std::vector<std::string> tags;
  std::string cur;
  for (char c : raw) {
    if (c == '<' || c == '>' || c == '|' || c == ' ') {
      if (!cur.empty()) tags.push_back(lower(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tags.push_back(lower(cur));
  return tags;
}

// Converts a JSON-lines record into the attribute map used by the XML path.
Attributes json_to_attributes(const json& j) {
  Attributes a;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_string()) {
      a.emplace(it.key(), v.get<std::string>());
    } else if (v.is_number_integer()) {
      a.emplace(it.key(), std::to_string(v.get<std::int64_t>()));
    } else if (v.is_array()) {
      std::string tags;
      for (const auto& t : v) {
        if (t.is_string()) tags += "<" + t.get<std::string>() + ">";
      }
      a.emplace(it.key(), tags);
    } else if (v.is_boolean()) {
      a.emplace(it.key(), v.get<bool>() ? "1" : "0");
    }
  }
  return a;
}

template <typename RowSource>
PostsParseResult collect_posts(RowSource&& next_row) {
  PostsParseResult r;
  std::vector<AnswerRecord> answers;
  while (true) {
    auto row = next_row();
    if (!row) break;
    if (!row->has_value()) {
      ++r.malformed_rows;
      continue;
    }
    const auto& a = **row;
    auto id = int_attr(a, "Id");
    auto type = int_attr(a, "PostTypeId");
    if (!id || !type || *id <= 0) {
      ++r.malformed_rows;
      continue;
    }
    if (*type == 1) {
      QuestionRecord q;
      q.id = *id;
      q.title = str_attr(a, "Title");
      q.view_count = std::max<std::int64_t>(0, int_attr(a, "ViewCount").value_or(0));
      q.tags = parse_tags(str_attr(a, "Tags"));
      q.body_html = str_attr(a, "Body");
      q.accepted_answer_id = int_attr(a, "AcceptedAnswerId").value_or(0);
      r.questions.push_back(std::move(q));
    } else if (*type == 2) {
      auto parent = int_attr(a, "ParentId");
      if (!parent) {
        ++r.malformed_rows;
        continue;
      }
      AnswerRecord ans;
      ans.id = *id;
      ans.question_id = *parent;
      ans.score = int_attr(a, "Score").value_or(0);
      ans.body_html = str_attr(a, "Body");
      answers.push_back(std::move(ans));
    }
  }
  std::sort(r.questions.begin(), r.questions.end(),
            [](const auto& x, const auto& y) { return x.id < y.id; });
  std::unordered_map<std::int64_t, const QuestionRecord*> by_id;
  for (const auto& q : r.questions) by_id.emplace(q.id, &q);
  for (auto& ans : answers) {
    auto it = by_id.find(ans.question_id);
    if (it == by_id.end()) {
      ++r.orphan_answers;
      continue;
    }
    ans.is_accepted = it->second->accepted_answer_id == ans.id;
    r.answers.push_back(std::move(ans));
  }
  std::sort(r.answers.begin(), r.answers.end(),
            [](const auto& x, const auto& y) { return x.id < y.id; });
  return r;
}

template <typename RowSource>
CommentsParseResult collect_comments(RowSource&& next_row) {
  CommentsParseResult r;
  while (true) {
    auto row = next_row();
    if (!row) break;
    if (!row->has_value()) {
      ++r.malformed_rows;
      continue;
    }
    const auto& a = **row;
    auto id = int_attr(a, "Id");
    auto post = int_attr(a, "PostId");
    if (!id || !post || *id <= 0) {
      ++r.malformed_rows;
      continue;
    }
    DiscussionComment c;
    c.id = *id;
    c.post_id = *post;
    c.score = std::max<std::int64_t>(0, int_attr(a, "Score").value_or(0));
    c.text = str_attr(a, "Text");
    c.author_id = int_attr(a, "UserId").value_or(0);
    c.author_display_name = str_attr(a, "UserDisplayName");
    r.comments.push_back(std::move(c));
  }
  std::sort(r.comments.begin(), r.comments.end(), [](const auto& x, const auto& y) {
    return std::tie(x.post_id, x.id) < std::tie(y.post_id, y.id);
  });
  std::int64_t post = -1;
  int seq = 0;
  for (auto& c : r.comments) {
    if (c.post_id != post) {
      post = c.post_id;
      seq = 0;
    }
    c.sequence_index = seq++;
  }
  return r;
}

// Outer nullopt: end of stream. Inner nullopt: broken row.
using RowResult = std::optional<std::optional<Attributes>>;

auto xml_rows(std::istream& in) {
  return [&in, parser = std::make_shared<RowParser>()]() -> RowResult {
    std::string line;
    while (std::getline(in, line)) {
      auto pos = line.find("<row");
      if (pos == std::string::npos) continue;
      return RowResult(std::in_place, parser->parse(std::string_view(line).substr(pos)));
    }
    return std::nullopt;
  };
}

auto jsonl_rows(std::istream& in) {
  return [&in]() -> RowResult {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) return RowResult(std::in_place, std::nullopt);
      return RowResult(std::in_place, json_to_attributes(j));
    }
    return std::nullopt;
  };
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Case-insensitive search for an opening tag `<name` followed by `>` or space.
// `lhtml` must already be lowercased.
std::size_t find_open_tag(std::string_view lhtml, std::string_view name, std::size_t from) {
  while (true) {
    auto pos = lhtml.find(std::string("<") + std::string(name), from);
    if (pos == std::string::npos) return pos;
    auto after = pos + 1 + name.size();
    if (after < lhtml.size() && (lhtml[after] == '>' || std::isspace(static_cast<unsigned char>(lhtml[after])) ||
                                 lhtml[after] == '/')) {
      return pos;
    }
    from = pos + 1;
  }
}

std::string strip_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_tag = false;
  for (char c : s) {
    if (in_tag) {
      if (c == '>') in_tag = false;
    } else if (c == '<') {
      in_tag = true;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string rstrip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

bool QuestionRecord::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), lower(tag)) != tags.end();
}

std::string SegmentId::str() const { return std::to_string(answer_id) + ":" + std::to_string(ordinal); }

SegmentId SegmentId::parse(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorKind::InvalidInput, "bad segment id: " + std::string(s));
  auto a = to_int(s.substr(0, colon));
  auto o = to_int(s.substr(colon + 1));
  if (!a || !o) throw Error(ErrorKind::InvalidInput, "bad segment id: " + std::string(s));
  return {*a, static_cast<int>(*o)};
}

const CodeSegment* AnswerRecord::segment(int ordinal) const {
  for (const auto& s : segments) {
    if (s.id.ordinal == ordinal) return &s;
  }
  return nullptr;
}

int AnswerRecord::total_code_lines() const {
  int n = 0;
  for (const auto& s : segments) n += s.line_count;
  return n;
}

PostsParseResult parse_posts(std::istream& in) { return collect_posts(xml_rows(in)); }
PostsParseResult parse_posts_jsonl(std::istream& in) { return collect_posts(jsonl_rows(in)); }
CommentsParseResult parse_comments(std::istream& in) { return collect_comments(xml_rows(in)); }
CommentsParseResult parse_comments_jsonl(std::istream& in) { return collect_comments(jsonl_rows(in)); }

std::string decode_html_entities(std::string_view s) {
  static const std::map<std::string, std::uint32_t, std::less<>> named = {
      {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''}, {"nbsp", 0xA0}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    auto ent = s.substr(i + 1, semi - i - 1);
    std::optional<std::uint32_t> cp;
    if (!ent.empty() && ent[0] == '#') {
      std::uint32_t v = 0;
      const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      auto digits = ent.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) cp = v;
    } else if (auto it = named.find(ent); it != named.end()) {
      cp = it->second;
    }
    if (!cp) {
      out.push_back('&');
      continue;
    }
    append_utf8(out, *cp);
    i = semi;
  }
  return out;
}

int count_code_lines(std::string_view text) {
  int n = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    if (line.find_first_not_of(" \t\r\f\v") != std::string_view::npos) ++n;
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return n;
}

double code_char_ratio(std::string_view text) {
  if (text.empty()) return 0.0;
  constexpr std::string_view code_chars = ";{}()=<>[].&|+-*/\"";
  std::size_t hits = 0;
  for (char c : text) {
    if (code_chars.find(c) != std::string_view::npos) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(text.size());
}

bool looks_like_identifier(std::string_view tok) {
  while (!tok.empty() && (tok.back() == ';' || tok.back() == ',' || tok.back() == ':')) tok.remove_suffix(1);
  if (tok.size() > 2 && tok.ends_with("()")) return true;
  auto uc = [&](std::size_t i) { return static_cast<unsigned char>(tok[i]); };
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (std::islower(uc(i - 1)) && std::isupper(uc(i))) return true;
    const bool has_next = i + 1 < tok.size();
    if (tok[i] == '_' && has_next && std::isalnum(uc(i - 1)) && std::isalnum(uc(i + 1))) return true;
    if (tok[i] == '.' && has_next && std::isalpha(uc(i - 1)) && std::isalpha(uc(i + 1))) return true;
  }
  return false;
}

double identifier_fraction(std::string_view text) {
  std::size_t total = 0, ids = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      ++total;
      if (looks_like_identifier(text.substr(i, j - i))) ++ids;
    }
    i = j;
  }
  return total == 0 ? 0.0 : static_cast<double>(ids) / static_cast<double>(total);
}

bool is_false_positive(std::string_view block, const CodeBlockFilter& filter) {
  if (count_code_lines(block) < filter.min_lines) return true;
  return code_char_ratio(block) < filter.min_code_char_ratio &&
         identifier_fraction(block) < filter.min_identifier_fraction;
}

SegmentExtraction extract_code_segments(std::int64_t answer_id, std::string_view html,
                                        const CodeBlockFilter& filter) {
  SegmentExtraction out;
  const auto lhtml = lower(html);
  int ordinal = 0;
  std::size_t pos = 0;
  while (true) {
    auto pre = find_open_tag(lhtml, "pre", pos);
    if (pre == std::string::npos) break;
    auto pre_end = lhtml.find('>', pre);
    if (pre_end == std::string::npos) break;
    auto close_pre = lhtml.find("</pre", pre_end);
    const auto block_end = close_pre == std::string::npos ? lhtml.size() : close_pre;
    pos = block_end;

    auto inner_start = lhtml.find_first_not_of(" \t\r\n", pre_end + 1);
    if (inner_start == std::string::npos || inner_start >= block_end ||
        find_open_tag(lhtml, "code", inner_start) != inner_start) {
      continue;  // <pre> without a leading <code>
    }
    auto code_end = lhtml.find('>', inner_start);
    if (code_end == std::string::npos || code_end >= block_end) continue;
    auto close_code = lhtml.rfind("</code", block_end);
    if (close_code == std::string::npos || close_code <= code_end) close_code = block_end;

    auto inner = html.substr(code_end + 1, close_code - code_end - 1);
    auto text = rstrip(decode_html_entities(strip_tags(inner)));
    const int ord = ordinal++;
    if (is_false_positive(text, filter)) {
      out.rejected.push_back(std::move(text));
      continue;
    }
    CodeSegment seg;
    seg.id = {answer_id, ord};
    seg.line_count = count_code_lines(text);
    seg.raw_text = std::move(text);
    out.segments.push_back(std::move(seg));
  }
  return out;
}

Domain domain_of(const QuestionRecord& q) {
  if (q.has_tag("android")) return Domain::Android;
  if (q.has_tag("c#")) return Domain::CSharp;
  if (q.has_tag("java")) return Domain::Java;
  return Domain::Any;
}

// ---------------------------------------------------------------------------

void Index::reindex() {
  std::sort(questions.begin(), questions.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(answers.begin(), answers.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (auto& a : answers) {
    std::sort(a.segments.begin(), a.segments.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  }
  std::sort(comments.begin(), comments.end(), [](const auto& a, const auto& b) {
    return std::tie(a.post_id, a.sequence_index, a.id) < std::tie(b.post_id, b.sequence_index, b.id);
  });
  question_pos_.clear();
  answer_pos_.clear();
  comment_pos_.clear();
  comment_range_.clear();
  for (std::size_t i = 0; i < questions.size(); ++i) question_pos_[questions[i].id] = i;
  for (std::size_t i = 0; i < answers.size(); ++i) answer_pos_[answers[i].id] = i;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    comment_pos_[comments[i].id] = i;
    auto [it, inserted] = comment_range_.try_emplace(comments[i].post_id, i, i + 1);
    if (!inserted) it->second.second = i + 1;
  }
}

const QuestionRecord* Index::question(std::int64_t id) const {
  auto it = question_pos_.find(id);
  return it == question_pos_.end() ? nullptr : &questions[it->second];
}

const AnswerRecord* Index::answer(std::int64_t id) const {
  auto it = answer_pos_.find(id);
  return it == answer_pos_.end() ? nullptr : &answers[it->second];
}

const DiscussionComment* Index::comment(std::int64_t id) const {
  auto it = comment_pos_.find(id);
  return it == comment_pos_.end() ? nullptr : &comments[it->second];
}

std::span<const DiscussionComment> Index::comments_for(std::int64_t answer_id) const {
  auto it = comment_range_.find(answer_id);
  if (it == comment_range_.end()) return {};
  return std::span<const DiscussionComment>(comments).subspan(it->second.first,
                                                              it->second.second - it->second.first);
}

const CodeSegment* Index::segment(const SegmentId& id) const {
  const auto* a = answer(id.answer_id);
  return a == nullptr ? nullptr : a->segment(id.ordinal);
}

std::vector<const CodeSegment*> Index::all_segments() const {
  std::vector<const CodeSegment*> out;
  for (const auto& a : answers) {
    for (const auto& s : a.segments) out.push_back(&s);
  }
  return out;
}

std::size_t Index::segment_count() const {
  std::size_t n = 0;
  for (const auto& a : answers) n += a.segments.size();
  return n;
}

double IngestStats::discarded_percentage() const {
  const auto total = segments + rejected_segments;
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(rejected_segments) / static_cast<double>(total);
}

Index build_index(PostsParseResult posts, CommentsParseResult comments,
                  const std::filesystem::path& data_dir, const CodeBlockFilter& filter,
                  IngestStats* stats) {
  Index index;
  IngestStats st;
  st.malformed_rows = posts.malformed_rows + comments.malformed_rows;
  st.orphan_answers = posts.orphan_answers;
  index.questions = std::move(posts.questions);
  index.answers = std::move(posts.answers);
  index.reindex();

  std::map<Domain, StopLists> stop_cache;
  auto stop_for = [&](Domain d) -> const StopLists& {
    auto it = stop_cache.find(d);
    if (it == stop_cache.end()) it = stop_cache.emplace(d, StopLists::load(data_dir, d)).first;
    return it->second;
  };

  for (auto& a : index.answers) {
    const auto* q = index.question(a.question_id);
    const auto& stop = stop_for(q != nullptr ? domain_of(*q) : Domain::Any);
    auto extraction = extract_code_segments(a.id, a.body_html, filter);
    st.rejected_segments += extraction.rejected.size();
    for (auto& s : extraction.segments) s.tokens = tokenize(s.raw_text, TokenizeMode::Code, stop);
    st.segments += extraction.segments.size();
    a.segments = std::move(extraction.segments);
  }

  for (auto& c : comments.comments) {
    if (index.answer(c.post_id) != nullptr) index.comments.push_back(std::move(c));
  }
  index.reindex();
  st.questions = index.questions.size();
  st.answers = index.answers.size();
  st.comments = index.comments.size();
  if (stats != nullptr) *stats = st;
  return index;
}

FilterProfile FilterProfile::none() { return {}; }

FilterProfile FilterProfile::api_study() {
  FilterProfile p;
  p.name = "api-study";
  p.require_accepted = true;
  p.min_view_count = 500;
  p.require_segment = true;
  p.min_segment_lines = 3;
  p.min_comments = 10;
  return p;
}

FilterProfile FilterProfile::gold_style() {
  FilterProfile p = api_study();
  p.name = "gold-style";
  p.min_total_code_lines = 10;
  p.gold_candidate_min_score = 5;
  return p;
}

FilterProfile FilterProfile::by_name(std::string_view name) {
  if (name == "none") return none();
  if (name == "api-study") return api_study();
  if (name == "gold-style") return gold_style();
  throw Error(ErrorKind::InvalidInput, "unknown filter profile: " + std::string(name));
}

Index apply_corpus_filters(const Index& index, const FilterProfile& p) {
  Index out;
  std::set<std::int64_t> kept_questions;
  for (const auto& a : index.answers) {
    const auto* q = index.question(a.question_id);
    if (q == nullptr) continue;
    if (p.require_accepted && !a.is_accepted) continue;
    if (q->view_count < p.min_view_count) continue;
    if (p.require_segment &&
        std::none_of(a.segments.begin(), a.segments.end(),
                     [&](const CodeSegment& s) { return s.line_count >= p.min_segment_lines; })) {
      continue;
    }
    auto thread = index.comments_for(a.id);
    if (thread.size() < p.min_comments) continue;
    if (a.total_code_lines() < p.min_total_code_lines) continue;
    out.answers.push_back(a);
    kept_questions.insert(q->id);
    for (const auto& c : thread) {
      out.comments.push_back(c);
      if (p.gold_candidate_min_score && c.score >= *p.gold_candidate_min_score) {
        out.gold_candidates.insert(c.id);
      }
    }
  }
  for (const auto& q : index.questions) {
    if (kept_questions.contains(q.id)) out.questions.push_back(q);
  }
  out.reindex();
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Internal, "cannot write " + path.string());
  for (const auto& r : rows) out << r.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingIndex, "index file missing: " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorKind::MissingIndex,
                  "corrupt index file " + path.string() + " at line " + std::to_string(lineno));
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

json stats_to_json(const IngestStats& s) {
  return {{"questions", s.questions},           {"answers", s.answers},
          {"segments", s.segments},             {"rejected_segments", s.rejected_segments},
          {"comments", s.comments},             {"malformed_rows", s.malformed_rows},
          {"orphan_answers", s.orphan_answers}};
}

}  // namespace

void save_index(const Index& index, const Manifest& manifest, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<json> rows;
  for (const auto& q : index.questions) {
    rows.push_back({{"id", q.id},
                    {"title", q.title},
                    {"view_count", q.view_count},
                    {"tags", q.tags},
                    {"accepted_answer_id", q.accepted_answer_id},
                    {"body_html", q.body_html}});
  }
  write_jsonl(dir / "questions.jsonl", rows);

  rows.clear();
  std::vector<json> seg_rows;
  for (const auto& a : index.answers) {
    rows.push_back({{"id", a.id},
                    {"question_id", a.question_id},
                    {"is_accepted", a.is_accepted},
                    {"score", a.score},
                    {"body_html", a.body_html}});
    for (const auto& s : a.segments) {
      json tokens = json::object();
      for (const auto& [tok, n] : s.tokens.counts()) tokens[tok] = n;
      seg_rows.push_back({{"id", s.id.str()},
                          {"answer_id", s.id.answer_id},
                          {"ordinal", s.id.ordinal},
                          {"line_count", s.line_count},
                          {"raw_text", s.raw_text},
                          {"tokens", std::move(tokens)}});
    }
  }
  write_jsonl(dir / "answers.jsonl", rows);
  write_jsonl(dir / "segments.jsonl", seg_rows);

  rows.clear();
  for (const auto& c : index.comments) {
    rows.push_back({{"id", c.id},
                    {"post_id", c.post_id},
                    {"author_id", c.author_id},
                    {"author_display_name", c.author_display_name},
                    {"text", c.text},
                    {"score", c.score},
                    {"sequence_index", c.sequence_index}});
  }
  write_jsonl(dir / "comments.jsonl", rows);

  json m = {{"schema_version", manifest.schema_version},
            {"dump_hash", manifest.dump_hash},
            {"filter_profile", manifest.filter_profile},
            {"counts", stats_to_json(manifest.stats)},
            {"gold_candidates", std::vector<std::int64_t>(index.gold_candidates.begin(),
                                                          index.gold_candidates.end())}};
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << m.dump(2) << '\n';
}

Index load_index(const std::filesystem::path& dir, Manifest* manifest) {
  const auto mpath = dir / "manifest.json";
  std::ifstream min(mpath);
  if (!min) {
    throw Error(ErrorKind::MissingIndex,
                "no index at " + dir.string() + " (run `insight ingest` first)");
  }
  auto m = json::parse(min, nullptr, false);
  if (m.is_discarded() || !m.is_object()) throw Error(ErrorKind::MissingIndex, "corrupt manifest: " + mpath.string());
  if (m.value("schema_version", 0) != kIndexSchemaVersion) {
    throw Error(ErrorKind::MissingIndex,
                "index schema version mismatch at " + dir.string() + " (re-run `insight ingest`)");
  }

  Index index;
  try {
    for (const auto& j : read_jsonl(dir / "questions.jsonl")) {
      QuestionRecord q;
      q.id = j.at("id");
      q.title = j.at("title");
      q.view_count = j.at("view_count");
      q.tags = j.at("tags").get<std::vector<std::string>>();
      q.accepted_answer_id = j.at("accepted_answer_id");
      q.body_html = j.at("body_html");
      index.questions.push_back(std::move(q));
    }
    for (const auto& j : read_jsonl(dir / "answers.jsonl")) {
      AnswerRecord a;
      a.id = j.at("id");
      a.question_id = j.at("question_id");
      a.is_accepted = j.at("is_accepted");
      a.score = j.at("score");
      a.body_html = j.at("body_html");
      index.answers.push_back(std::move(a));
    }
    index.reindex();
    std::unordered_map<std::int64_t, std::size_t> pos;
    for (std::size_t i = 0; i < index.answers.size(); ++i) pos[index.answers[i].id] = i;
    for (const auto& j : read_jsonl(dir / "segments.jsonl")) {
      CodeSegment s;
      s.id = {j.at("answer_id").get<std::int64_t>(), j.at("ordinal").get<int>()};
      s.line_count = j.at("line_count");
      s.raw_text = j.at("raw_text");
      for (auto it = j.at("tokens").begin(); it != j.at("tokens").end(); ++it) {
        s.tokens.add(it.key(), it.value().get<std::int64_t>());
      }
      auto p = pos.find(s.id.answer_id);
      if (p == pos.end()) throw Error(ErrorKind::MissingIndex, "segment " + s.id.str() + " has no answer");
      index.answers[p->second].segments.push_back(std::move(s));
    }
    for (const auto& j : read_jsonl(dir / "comments.jsonl")) {
      DiscussionComment c;
      c.id = j.at("id");
      c.post_id = j.at("post_id");
      c.author_id = j.at("author_id");
      c.author_display_name = j.at("author_display_name");
      c.text = j.at("text");
      c.score = j.at("score");
      c.sequence_index = j.at("sequence_index");
      index.comments.push_back(std::move(c));
    }
    for (const auto& g : m.value("gold_candidates", json::array())) index.gold_candidates.insert(g.get<std::int64_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MissingIndex, std::string("corrupt index: ") + e.what());
  }
  index.reindex();

  if (manifest != nullptr) {
    manifest->schema_version = m.at("schema_version");
    manifest->dump_hash = m.value("dump_hash", "");
    manifest->filter_profile = m.value("filter_profile", "");
    const auto counts = m.value("counts", json::object());
    manifest->stats.questions = counts.value("questions", 0U);
    manifest->stats.answers = counts.value("answers", 0U);
    manifest->stats.segments = counts.value("segments", 0U);
    manifest->stats.rejected_segments = counts.value("rejected_segments", 0U);
    manifest->stats.comments = counts.value("comments", 0U);
    manifest->stats.malformed_rows = counts.value("malformed_rows", 0U);
    manifest->stats.orphan_answers = counts.value("orphan_answers", 0U);
  }
  return index;
}

}  // namespace insight
