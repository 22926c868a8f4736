// Copyright 2026 The mtnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "gtest/gtest.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/file_util.h"
#include "mtnoise/noise.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace mtnoise {
namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

std::string Quote(const std::string& arg) {
  std::string q = "'";
  for (char c : arg) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

CliResult RunCli(const std::vector<std::string>& args,
                 const std::filesystem::path& scratch) {
  std::vector<std::string> quoted = {Quote(MTNOISE_CLI_PATH)};
  for (const auto& a : args) quoted.push_back(Quote(a));
  const auto out_path = scratch / "stdout.txt";
  const std::string cmd = absl::StrCat(absl::StrJoin(quoted, " "), " >",
                                       Quote(out_path.string()), " 2>/dev/null");
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = ReadFile(out_path).value_or("");
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    MTNOISE_ASSERT_OK(WriteFileAtomic(dir_.path() / "in.txt",
                                      "the quick brown fox\njumps over\n\nthe lazy dog\n"));
  }
  std::string Path(const std::string& name) const {
    return (dir_.path() / name).string();
  }
  CliResult Run(const std::vector<std::string>& args) {
    return RunCli(args, dir_.path());
  }
  testing::TempDir dir_;
};

TEST_F(CliTest, NoiseAtZeroIsByteIdentical) {
  auto r = Run({"noise", "--type", "swap", "--p", "0", "--seed", "1", "--in",
                Path("in.txt"), "--out", Path("out.txt")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(*ReadFile(Path("out.txt")), *ReadFile(Path("in.txt")));
  EXPECT_TRUE(std::filesystem::exists(Path("out.txt.jsonl")));
}

TEST_F(CliTest, NoiseProvenanceReplays) {
  auto r = Run({"noise", "--type", "key", "--layout", "qwerty", "--p", "0.7",
                "--seed", "5", "--in", Path("in.txt"), "--out", Path("out.txt")});
  ASSERT_EQ(r.code, 0);
  auto noised = ReadNoisedJsonl(Path("out.txt.jsonl"));
  auto clean = LoadPlainCorpus(Path("in.txt"));
  ASSERT_TRUE(noised.ok() && clean.ok());
  EXPECT_TRUE(VerifyReplay(*clean, *noised).ok());
  EXPECT_EQ(FormatPlainCorpus(noised->AsSegments()), *ReadFile(Path("out.txt")));
}

TEST_F(CliTest, KeyNoiseWithoutLayoutIsUsageError) {
  auto r = Run({"noise", "--type", "key", "--p", "0.5", "--in", Path("in.txt"),
                "--out", Path("out.txt")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  EXPECT_EQ(Run({"noise", "--bogus"}).code, 2);
  EXPECT_EQ(Run({}).code, 2);
}

TEST_F(CliTest, MissingInputIsDataError) {
  auto r = Run({"noise", "--type", "swap", "--p", "0.5", "--in", Path("missing.txt"),
                "--out", Path("out.txt")});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, LadderEmitsTenLevelsDeterministically) {
  auto first = Run({"ladder", "--type", "drop", "--seed", "9", "--in", Path("in.txt"),
                    "--out-dir", Path("l1")});
  auto second = Run({"ladder", "--type", "drop", "--seed", "9", "--in", Path("in.txt"),
                     "--out-dir", Path("l2")});
  ASSERT_EQ(first.code, 0);
  ASSERT_EQ(second.code, 0);
  int txt = 0;
  for (const auto& e : std::filesystem::directory_iterator(Path("l1"))) {
    if (e.path().extension() == ".txt") ++txt;
    const auto twin = std::filesystem::path(Path("l2")) / e.path().filename();
    EXPECT_EQ(*ReadFile(e.path()), *ReadFile(twin)) << e.path();
  }
  EXPECT_EQ(txt, 10);
  auto manifest = ReadFile(std::filesystem::path(Path("l1")) / "in.drop.manifest.json");
  ASSERT_TRUE(manifest.ok());
  const auto j = nlohmann::json::parse(*manifest);
  EXPECT_EQ(j["seed"], 9);
}

TEST_F(CliTest, LadderManifestRecordsLayoutChecksum) {
  auto r = Run({"ladder", "--type", "key", "--layout", "qwertz", "--seed", "2", "--in",
                Path("in.txt"), "--out-dir", Path("l")});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(
      *ReadFile(std::filesystem::path(Path("l")) / "in.key.manifest.json"));
  EXPECT_EQ(j["layout_sha256"].get<std::string>().size(), 64u);
}

TEST_F(CliTest, EvalChrfOnIdenticalFiles) {
  auto r = Run({"eval", "--metric", "chrf", "--hyp", Path("in.txt"), "--ref",
                Path("in.txt")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "chrf\t100.000000\n");
}

TEST_F(CliTest, EvalWritesSentenceScores) {
  auto r = Run({"eval", "--metric", "bleu", "--hyp", Path("in.txt"), "--ref",
                Path("in.txt"), "--scores-out", Path("s.tsv")});
  ASSERT_EQ(r.code, 0);
  auto scores = ReadScoreFile(Path("s.tsv"));
  ASSERT_TRUE(scores.ok()) << scores.status();
  EXPECT_EQ(scores->rows.size(), 4u);
}

TEST_F(CliTest, SlopeOnBundledTrajectory) {
  auto r = Run({"slope", "--trajectory", std::string(MTNOISE_DEMO_DIR) + "/trajectory.csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("slope\t-20.000000\n", 0), 0u) << r.out;
}

TEST_F(CliTest, ReportOnEmptyRunDirIsHeaderOnly) {
  std::filesystem::create_directories(Path("empty"));
  auto r = Run({"report", "--runs", Path("empty"), "--out", Path("report")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(*ReadFile(std::filesystem::path(Path("report")) / "report.csv"),
            "system,metric,noise_type,clean,slope,n_points,rss\n");
}

TEST_F(CliTest, FertilityWithCharacters) {
  MTNOISE_ASSERT_OK(WriteFileAtomic(Path("ab.txt"), "ab cd\n"));
  auto r = Run({"fertility", "--in", Path("ab.txt"), "--chars"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2"), std::string::npos) << r.out;
}

TEST_F(CliTest, GenTrainCorrectionSet) {
  auto r = Run({"gen-train", "--task", "correction", "--src", Path("in.txt"), "--mix",
                "swap=0.5,drop=0.5", "--seed", "4", "--name", "corr", "--out-dir",
                Path("train")});
  ASSERT_EQ(r.code, 0);
  auto input = LoadPlainCorpus(std::filesystem::path(Path("train")) / "corr.input.txt");
  ASSERT_TRUE(input.ok());
  EXPECT_EQ(input->size(), 4u);
}

TEST_F(CliTest, ConfigFileSuppliesFlagsAndRejectsExtras) {
  MTNOISE_ASSERT_OK(WriteFileAtomic(Path("good.ini"), "jobs=2\n"));
  EXPECT_EQ(Run({"--config", Path("good.ini"), "layout", "--list"}).code, 0);
  MTNOISE_ASSERT_OK(WriteFileAtomic(Path("bad.ini"), "no_such_option=2\n"));
  EXPECT_EQ(Run({"--config", Path("bad.ini"), "layout", "--list"}).code, 2);
}

TEST_F(CliTest, JobsMayFollowTheSubcommand) {
  auto r = Run({"layout", "--list", "--jobs", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("qwerty"), std::string::npos);
}

}  // namespace
}  // namespace mtnoise
