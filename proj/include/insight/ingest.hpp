#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "insight/textproc.hpp"

namespace insight {

struct QuestionRecord {
  std::int64_t id = 0;
  std::string title;
  std::int64_t view_count = 0;
  std::vector<std::string> tags;  // lowercase
  std::string body_html;
  std::int64_t accepted_answer_id = 0;  // 0 when none

  bool has_tag(std::string_view tag) const;
};

/// Stable segment identity: owning answer plus the block's position among the
/// answer's `<pre><code>` blocks in document order.
struct SegmentId {
  std::int64_t answer_id = 0;
  int ordinal = 0;

  std::string str() const;  // "<answer_id>:<ordinal>"
  static SegmentId parse(std::string_view s);

  friend auto operator<=>(const SegmentId&, const SegmentId&) = default;
};

struct CodeSegment {
  SegmentId id;
  std::string raw_text;
  int line_count = 0;
  TokenMultiset tokens;

  std::int64_t answer_id() const { return id.answer_id; }
};

struct AnswerRecord {
  std::int64_t id = 0;
  std::int64_t question_id = 0;
  bool is_accepted = false;
  std::int64_t score = 0;
  std::string body_html;
  std::vector<CodeSegment> segments;

  const CodeSegment* segment(int ordinal) const;
  int total_code_lines() const;
};

struct DiscussionComment {
  std::int64_t id = 0;
  std::int64_t post_id = 0;
  std::int64_t author_id = 0;
  std::string author_display_name;
  std::string text;
  std::int64_t score = 0;
  int sequence_index = 0;
};

// ---------------------------------------------------------------------------
// Dump parsing

struct PostsParseResult {
  std::vector<QuestionRecord> questions;
  std::vector<AnswerRecord> answers;  // segments not yet extracted
  std::size_t malformed_rows = 0;
  std::size_t orphan_answers = 0;
};

/// Reads `Posts.xml` rows (one `<row .../>` per line). PostTypeId 1 is a
/// question, 2 an answer; other post types are ignored. Rows that are not
/// well-formed or lack Id/PostTypeId are counted and skipped. Answers whose
/// ParentId does not resolve are dropped as orphans.
PostsParseResult parse_posts(std::istream& in);

/// Same contract for `posts.jsonl` with identical attribute names.
PostsParseResult parse_posts_jsonl(std::istream& in);

struct CommentsParseResult {
  std::vector<DiscussionComment> comments;  // grouped by post, ascending id
  std::size_t malformed_rows = 0;
};

/// Reads `Comments.xml` rows. Comments are grouped per post and numbered by
/// ascending comment Id. A missing Score means 0.
CommentsParseResult parse_comments(std::istream& in);
CommentsParseResult parse_comments_jsonl(std::istream& in);

// ---------------------------------------------------------------------------
// Code segments

/// Thresholds of the false-positive filter applied to extracted blocks.
struct CodeBlockFilter {
  int min_lines = 2;
  double min_code_char_ratio = 0.02;
  double min_identifier_fraction = 0.10;
};

struct SegmentExtraction {
  std::vector<CodeSegment> segments;  // kept blocks, tokens left empty
  std::vector<std::string> rejected;  // raw text of discarded blocks
};

/// Decodes named (amp, lt, gt, quot, apos, nbsp) and numeric HTML entities.
std::string decode_html_entities(std::string_view s);

/// Number of non-blank lines.
int count_code_lines(std::string_view text);
/// Fraction of characters drawn from `;{}()=<>[].&|+-*/"`.
double code_char_ratio(std::string_view text);
/// Fraction of whitespace-separated tokens that look like identifiers
/// (camelCase, snake_case, dotted, or ending in `()`).
double identifier_fraction(std::string_view text);
bool looks_like_identifier(std::string_view token);

/// True if the block should be discarded as not being code.
bool is_false_positive(std::string_view block, const CodeBlockFilter& filter);

/// Extracts the inner text of `<pre><code>` blocks in document order. Inline
/// `<code>` outside `<pre>` is ignored. Nested markup inside a block is
/// stripped and entities decoded. Ordinals count every `<pre><code>` block,
/// kept or rejected, so ids do not depend on filter thresholds.
SegmentExtraction extract_code_segments(std::int64_t answer_id, std::string_view body_html,
                                        const CodeBlockFilter& filter = {});

// ---------------------------------------------------------------------------
// Index

/// Domain of a question from its tags; android wins over java.
Domain domain_of(const QuestionRecord& q);

/**
 * In-memory index of questions, answers (with their segments) and comments.
 * Records are kept sorted by id (comments by post then sequence) and looked
 * up through hash maps rebuilt by `reindex()`. Treat as immutable once built;
 * concurrent readers are safe.
 */
class Index {
 public:
  std::vector<QuestionRecord> questions;
  std::vector<AnswerRecord> answers;
  std::vector<DiscussionComment> comments;
  std::set<std::int64_t> gold_candidates;

  /// Sorts records and rebuilds lookup tables. Call after any mutation.
  void reindex();

  const QuestionRecord* question(std::int64_t id) const;
  const AnswerRecord* answer(std::int64_t id) const;
  const DiscussionComment* comment(std::int64_t id) const;
  std::span<const DiscussionComment> comments_for(std::int64_t answer_id) const;

  const CodeSegment* segment(const SegmentId& id) const;
  /// Every segment in (answer_id, ordinal) order.
  std::vector<const CodeSegment*> all_segments() const;

  std::size_t segment_count() const;

 private:
  std::unordered_map<std::int64_t, std::size_t> question_pos_;
  std::unordered_map<std::int64_t, std::size_t> answer_pos_;
  std::unordered_map<std::int64_t, std::size_t> comment_pos_;
  std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>> comment_range_;
};

struct IngestStats {
  std::size_t questions = 0;
  std::size_t answers = 0;
  std::size_t segments = 0;
  std::size_t rejected_segments = 0;
  std::size_t comments = 0;
  std::size_t malformed_rows = 0;
  std::size_t orphan_answers = 0;

  double discarded_percentage() const;
};

/// Joins parsed posts and comments, extracts and tokenizes code segments.
/// Comments on posts other than indexed answers are dropped. Each segment is
/// tokenized with the keyword list of its question's domain.
Index build_index(PostsParseResult posts, CommentsParseResult comments,
                  const std::filesystem::path& data_dir, const CodeBlockFilter& filter,
                  IngestStats* stats = nullptr);

/// Filter thresholds. Tightening any of them never adds records.
struct FilterProfile {
  std::string name = "none";
  bool require_accepted = false;
  std::int64_t min_view_count = 0;
  int min_segment_lines = 0;     // some segment must reach this
  bool require_segment = false;
  std::size_t min_comments = 0;
  int min_total_code_lines = 0;
  std::optional<std::int64_t> gold_candidate_min_score;

  static FilterProfile none();
  static FilterProfile api_study();
  static FilterProfile gold_style();
  /// "none", "api-study" or "gold-style".
  static FilterProfile by_name(std::string_view name);
};

/// Keeps answers meeting the profile plus the questions, segments and comments
/// they reference.
Index apply_corpus_filters(const Index& index, const FilterProfile& profile);

// ---------------------------------------------------------------------------
// Persistence

inline constexpr int kIndexSchemaVersion = 1;

struct Manifest {
  int schema_version = kIndexSchemaVersion;
  std::string dump_hash;  // fnv1a64 hex over input bytes
  std::string filter_profile;
  IngestStats stats;
};

/// 64-bit FNV-1a, used to fingerprint dump files.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Writes questions/answers/segments/comments.jsonl and manifest.json.
/// Output is byte-stable for identical input.
void save_index(const Index& index, const Manifest& manifest, const std::filesystem::path& dir);

/// Throws Error(MissingIndex) when the directory or manifest is absent or the
/// schema version does not match.
Index load_index(const std::filesystem::path& dir, Manifest* manifest = nullptr);

}  // namespace insight
