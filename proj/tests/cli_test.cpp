#include <gtest/gtest.h>

#include <unistd.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "test_support.hpp"

namespace ts = testing_support;
namespace fs = std::filesystem;
using ts::shell_quote;

namespace {

std::string fixture(const std::string& rel) { return shell_quote((ts::fixtures() / rel).string()); }

std::string ingest_args(const fs::path& index, const std::string& dir) {
  return "--index " + shell_quote(index.string()) + " ingest --posts " + fixture(dir + "/Posts.xml") +
         " --comments " + fixture(dir + "/Comments.xml");
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir = ts::scratch_dir("cli"); }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

}  // namespace

TEST_F(CliTest, IngestShowcaseCounts) {
  const auto r = ts::run_cli(ingest_args(dir / "idx", "showcase"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("questions  2"), std::string::npos);
  EXPECT_NE(r.out.find("segments   2"), std::string::npos);
  EXPECT_NE(r.out.find("comments   13"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "idx" / "manifest.json"));
}

TEST_F(CliTest, IngestMissingPosts) {
  const auto r = ts::run_cli("--index " + shell_quote((dir / "idx").string()) +
                             " ingest --posts /nonexistent/Posts.xml --comments " + fixture("showcase/Comments.xml"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("input not found"), std::string::npos);
}

TEST_F(CliTest, IngestCensusPercentage) {
  const auto r = ts::run_cli("--json " + ingest_args(dir / "idx", "census"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const double pct = doc["discarded_percentage"];
  EXPECT_GE(pct, 6.0);
  EXPECT_LE(pct, 13.0);
}

TEST_F(CliTest, RankExplain) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "showcase")).exit_code, 0);
  const auto r = ts::run_cli("--index " + shell_quote((dir / "idx").string()) + " rank --answer-id 200 --explain");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "id\tP\tWC\tR\tCR\tS\tfrequency");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
}

TEST_F(CliTest, RankUnknownAnswer) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "showcase")).exit_code, 0);
  EXPECT_EQ(ts::run_cli("--index " + shell_quote((dir / "idx").string()) + " rank --answer-id 5").exit_code, 2);
}

TEST_F(CliTest, RecommendWithoutIndex) {
  const auto r = ts::run_cli("--index " + shell_quote((dir / "none").string()) + " recommend --code " +
                             fixture("showcase/query.java"));
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("hint"), std::string::npos);
}

TEST_F(CliTest, RecommendWithEmptyIndex) {
  {
    std::ofstream(dir / "Posts.xml") << "<posts>\n  <row Id=\"1\" PostTypeId=\"1\" ViewCount=\"3\" />\n</posts>\n";
    std::ofstream(dir / "Comments.xml") << "<comments>\n</comments>\n";
  }
  const auto idx = shell_quote((dir / "idx").string());
  ASSERT_EQ(ts::run_cli("--index " + idx + " ingest --posts " + shell_quote((dir / "Posts.xml").string()) +
                        " --comments " + shell_quote((dir / "Comments.xml").string()))
                .exit_code,
            0);
  EXPECT_EQ(ts::run_cli("--index " + idx + " recommend --code " + fixture("showcase/query.java")).exit_code, 3);
}

TEST_F(CliTest, EvalTable2FiveRows) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "eval30")).exit_code, 0);
  const auto r = ts::run_cli("--index " + shell_quote((dir / "idx").string()) + " eval --gold " +
                             fixture("eval30/gold.csv") + " --sets table2");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
  EXPECT_EQ(r.out.rfind("heuristics\t", 0), 0U);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "showcase")).exit_code, 0);
  std::ofstream(dir / "insight.conf") << "# test config\ntop-k=1\nindex=" << (dir / "idx").string() << "\n";
  const auto conf = shell_quote((dir / "insight.conf").string());
  auto r = ts::run_cli("--config " + conf + " --json rank --answer-id 200");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["recommendation"].size(), 1U);
  r = ts::run_cli("--config " + conf + " --top-k 2 --json rank --answer-id 200");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["recommendation"].size(), 2U);
}

TEST_F(CliTest, IndexFromEnvironment) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "showcase")).exit_code, 0);
  const auto r = ts::run_cli("rank --answer-id 200", "INSIGHT_INDEX_DIR=" + shell_quote((dir / "idx").string()));
  EXPECT_EQ(r.exit_code, 0) << r.err;
}

TEST_F(CliTest, BadConfigValueIsBadInput) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "showcase")).exit_code, 0);
  const auto r = ts::run_cli("--index " + shell_quote((dir / "idx").string()) + " --damping 1.5 rank --answer-id 200");
  EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, TopicsReport) {
  ASSERT_EQ(ts::run_cli(ingest_args(dir / "idx", "eval30")).exit_code, 0);
  const auto r = ts::run_cli("--index " + shell_quote((dir / "idx").string()) +
                             " --k 5 --iterations 50 topics --domain java");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("rank\ttopic_id\tdoc_frequency\twords\n", 0), 0U);
}
