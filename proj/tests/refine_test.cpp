#include <gtest/gtest.h>

#include <random>

#include "insight/refine.hpp"
#include "test_support.hpp"

using namespace insight;
namespace ts = testing_support;

namespace {

class RefineTest : public ::testing::Test {
 protected:
  RefinementRules rules = RefinementRules::load(ts::data_dir() / "refine");
};

std::string code_spans(const std::string& s) {
  std::string out;
  bool in = false;
  for (char c : s) {
    if (c == '`') {
      in = !in;
      out += '|';
    } else if (in) {
      out += c;
    }
  }
  return out;
}

}  // namespace

TEST_F(RefineTest, PronounAtSentenceStart) {
  EXPECT_EQ(refine_comment("You should not use the IV like this.", rules), "One should not use the IV like this.");
}

TEST_F(RefineTest, FullIvSentence) {
  EXPECT_EQ(refine_comment("You should not use the IV like this. For a given two messages, they should not have "
                           "been encrypted with the same Key and same IV",
                           rules),
            "One should not use the IV like this. For a given two messages, they should not have been encrypted "
            "with the same Key and same IV");
}

TEST_F(RefineTest, Empty) { EXPECT_EQ(refine_comment("", rules), ""); }

TEST_F(RefineTest, MentionContractionNumber) {
  EXPECT_EQ(refine_comment("@Stephen can't parse 3 items", rules), "can not parse three items");
}

TEST_F(RefineTest, MentionWithComma) {
  EXPECT_EQ(refine_comment("@Stephen, it doesn't work", rules), "it does not work");
}

TEST_F(RefineTest, LargeNumbersAndDecimalsUntouched) {
  EXPECT_EQ(refine_comment("Use 1000 or 2.5 or 12", rules), "Use 1000 or 2.5 or twelve");
}

TEST_F(RefineTest, IdentifiersUntouched) {
  EXPECT_EQ(refine_comment("call my_value() and myList.get(0)", rules), "call my_value() and myList.get(0)");
}

TEST_F(RefineTest, BacktickSpansPreserved) {
  EXPECT_EQ(refine_comment("you can't call `you can't 3` here", rules), "one can not call `you can't 3` here");
}

TEST_F(RefineTest, PossessivesAndI) {
  EXPECT_EQ(refine_comment("I think your code is fine, I tested it", rules),
            "One think one's code is fine, one tested it");
}

TEST(NumberWords, Examples) {
  EXPECT_EQ(number_to_words(0), "zero");
  EXPECT_EQ(number_to_words(3), "three");
  EXPECT_EQ(number_to_words(15), "fifteen");
  EXPECT_EQ(number_to_words(40), "forty");
  EXPECT_EQ(number_to_words(121), "one hundred twenty-one");
  EXPECT_EQ(number_to_words(999), "nine hundred ninety-nine");
}

TEST_F(RefineTest, IdempotentAndSpanSafeOnGeneratedCorpus) {
  const std::vector<std::string> words = {"you",   "your",  "I",        "can't", "doesn't", "3",     "42",
                                          "1000",  "it",    "works",    "the",   "code",    "@Alice", "@bob,",
                                          "foo()", "a.b",   "snake_id", "won't", "I'm",     "mine",  "HashMap",
                                          "yes.",  "fine!", "`x 7`",    "me",    "2.0",     "don't", "myself"};
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    std::string text;
    const int n = 1 + static_cast<int>(rng() % 14);
    for (int w = 0; w < n; ++w) {
      if (w > 0) text += ' ';
      text += words[rng() % words.size()];
    }
    const auto once = refine_comment(text, rules);
    EXPECT_EQ(refine_comment(once, rules), once) << text;
    EXPECT_EQ(code_spans(once), code_spans(text)) << text;
  }
}
