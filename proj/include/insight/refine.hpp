#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace insight {

/// Word tables driving comment refinement. Keys are lowercase.
struct RefinementRules {
  std::map<std::string, std::string, std::less<>> pronoun_map;
  std::map<std::string, std::string, std::less<>> contraction_map;

  /// Built-in tables.
  static RefinementRules defaults();
  /// Reads `pronouns.txt` and `contractions.txt` (word<TAB>replacement) from
  /// `dir`; a missing file falls back to the built-in table.
  static RefinementRules load(const std::filesystem::path& dir);
};

/// English words for 0..999, e.g. 3 -> "three", 121 -> "one hundred twenty-one".
std::string number_to_words(int n);

/**
 * Rewrites a raw discussion comment into a neutral code comment:
 *   1. drops `@Name` mentions (and a directly following comma),
 *   2. expands contractions ("can't" -> "can not"),
 *   3. replaces personal/possessive pronouns ("You" -> "One"),
 *   4. spells out standalone integers 0..999.
 * Text inside backticks and identifier-looking words are never touched. The
 * first letter's case is carried over to the replacement, except "I", which is
 * capitalized only at the start of a sentence. Idempotent.
 */
std::string refine_comment(std::string_view text, const RefinementRules& rules);

}  // namespace insight
