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

#include "mtnoise/experiment.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/file_util.h"
#include "mtnoise/noise.h"
#include "mtnoise/quality.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace mtnoise {
namespace {

using Json = nlohmann::json;

ExternalSystemSpec Mock(std::string id, SystemKind kind,
                        std::vector<std::string> args) {
  ExternalSystemSpec spec;
  spec.id = std::move(id);
  spec.kind = kind;
  spec.command = {MTNOISE_MOCK_PATH};
  spec.command.insert(spec.command.end(), args.begin(), args.end());
  spec.timeout_seconds = 30;
  return spec;
}

const std::vector<Segment>& Clean() {
  static const auto* clean = new std::vector<Segment>(MakeSegments(
      {"the quick brown fox jumps over the lazy dog",
       "a stitch in time saves nine", "", "robust translation matters",
       "Typos happen when people type quickly on small keyboards"}));
  return *clean;
}

// Clean variant followed by the ten ladder levels of `type`.
std::vector<CorpusVariant> Variants(NoiseType type, uint64_t seed = 7) {
  std::vector<CorpusVariant> out;
  CorpusVariant clean;
  clean.id = CleanCorpusId("toy");
  clean.base = "toy";
  clean.source = Clean();
  out.push_back(clean);
  const KeyboardLayout* layout = *BuiltinLayout("qwerty");
  auto ladder = MakeNoiseLadder(Clean(), type, layout, seed, "toy");
  EXPECT_TRUE(ladder.ok());
  for (int k = 1; k <= kLadderLevels; ++k) {
    CorpusVariant v;
    v.id = LadderCorpusId("toy", type, k);
    v.base = "toy";
    v.noise_type = std::string(NoiseTypeName(type));
    v.p = LadderLevelP(k);
    v.noise = (*ladder)[k - 1].noise;
    v.source = (*ladder)[k - 1].AsSegments();
    out.push_back(v);
  }
  return out;
}

RunContext Context(const testing::TempDir& dir) {
  RunContext ctx;
  ctx.experiment_dir = dir.path();
  ctx.languages = {"en", "en"};
  return ctx;
}

TEST(ExperimentTest, CorpusIds) {
  EXPECT_EQ(CleanCorpusId("wmt"), "wmt.clean");
  EXPECT_EQ(LadderCorpusId("wmt", NoiseType::kKey, 3), "wmt.key.p30");
  EXPECT_EQ(LadderCorpusId("wmt", NoiseType::kSwap, 10), "wmt.swap.p100");
}

TEST(ExperimentTest, LadderRunsAndResumes) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kSwap);
  const auto copy = Mock("copy", SystemKind::kTranslator, {"echo"});
  auto runs = TranslateLadder(ctx, copy, variants);
  ASSERT_TRUE(runs.ok()) << runs.status();
  ASSERT_EQ(runs->size(), 11u);
  EXPECT_EQ(ctx.external_calls, 11);
  for (size_t i = 0; i < runs->size(); ++i) {
    EXPECT_EQ((*runs)[i].outputs.size(), variants[i].source.size());
    EXPECT_EQ((*runs)[i].outputs, Texts(variants[i].source));
    EXPECT_TRUE(std::filesystem::exists(ctx.RunDir("copy", variants[i].id) / "run.json"));
  }
  RunContext again = Context(dir);
  auto resumed = TranslateLadder(again, copy, variants);
  ASSERT_TRUE(resumed.ok());
  EXPECT_EQ(again.external_calls, 0);
  for (const auto& r : *resumed) EXPECT_TRUE(r.resumed);
}

TEST(ExperimentTest, ChangedCommandInvalidatesResume) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kDupe);
  ASSERT_TRUE(TranslateCorpus(ctx, Mock("s", SystemKind::kTranslator, {"echo"}),
                              variants[1]).ok());
  auto other = TranslateCorpus(
      ctx, Mock("s", SystemKind::kTranslator, {"constant", "--text", "x"}), variants[1]);
  ASSERT_TRUE(other.ok());
  EXPECT_FALSE(other->resumed);
  EXPECT_EQ(other->outputs[0], "x");
}

TEST(ExperimentTest, RunJsonHasNoTimingUnlessRequested) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kDrop);
  ASSERT_TRUE(TranslateCorpus(ctx, Mock("s", SystemKind::kTranslator, {"echo"}),
                              variants[0]).ok());
  auto text = ReadFile(ctx.RunDir("s", variants[0].id) / "run.json");
  ASSERT_TRUE(text.ok());
  EXPECT_EQ(text->find("wall_seconds"), std::string::npos);
}

TEST(ExperimentTest, FailedRunKeepsPartialOutput) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kSwap);
  auto run = TranslateCorpus(
      ctx, Mock("s", SystemKind::kTranslator, {"drop-line", "--at", "2"}), variants[0]);
  ASSERT_FALSE(run.ok());
  EXPECT_TRUE(std::filesystem::exists(ctx.RunDir("s", variants[0].id) / "output.partial.txt"));
  EXPECT_FALSE(std::filesystem::exists(ctx.RunDir("s", variants[0].id) / "run.json"));
}

TEST(ExperimentTest, CleanSourcePolicySendsCleanText) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kKey);
  const auto copy = Mock("copy", SystemKind::kTranslator, {"echo"});
  auto runs = TranslateLadder(ctx, copy, variants);
  ASSERT_TRUE(runs.ok());
  const CorpusRegistry registry = {{"toy", Clean()}};
  const auto capture = (dir.path() / "capture.jsonl").string();
  const auto scorer = Mock("qe", SystemKind::kScorer, {"--capture", capture, "neg-edit"});
  auto scores = ScoreRuns(ctx, scorer, "qe", *runs, variants,
                          SourcePolicy::kCleanSource, registry, std::nullopt);
  ASSERT_TRUE(scores.ok()) << scores.status();
  auto lines = LoadPlainCorpus(capture);
  ASSERT_TRUE(lines.ok());
  ASSERT_EQ(lines->size(), 11 * Clean().size());
  for (size_t i = 0; i < lines->size(); ++i) {
    const Json request = Json::parse((*lines)[i].text);
    EXPECT_EQ(request["src"], Clean()[i % Clean().size()].text);
  }
}

TEST(ExperimentTest, PoliciesAgreeOnCleanRuns) {
  const auto variants = Variants(NoiseType::kSwap);
  RunRecord run{"copy", variants[0].id, Texts(Clean())};
  const CorpusRegistry registry = {{"toy", Clean()}};
  auto clean = BuildScorerRequests(run, variants[0], SourcePolicy::kCleanSource,
                                   registry, std::nullopt);
  auto actual = BuildScorerRequests(run, variants[0], SourcePolicy::kActualSource,
                                    registry, std::nullopt);
  ASSERT_TRUE(clean.ok() && actual.ok());
  EXPECT_EQ(*clean, *actual);
  EXPECT_FALSE(BuildScorerRequests(run, variants[0], SourcePolicy::kCleanSource, {},
                                   std::nullopt)
                   .ok());
}

TEST(ExperimentTest, DeltaQeWithEditDistanceMockIsNonNegative) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kDrop);
  const auto copy = Mock("copy", SystemKind::kTranslator, {"echo"});
  auto runs = TranslateLadder(ctx, copy, variants);
  ASSERT_TRUE(runs.ok());
  const CorpusRegistry registry = {{"toy", Clean()}};
  const auto scorer = Mock("qe", SystemKind::kScorer, {"neg-edit"});
  auto scores = ScoreRuns(ctx, scorer, "qe", *runs, variants,
                          SourcePolicy::kCleanSource, registry, std::nullopt);
  ASSERT_TRUE(scores.ok());
  for (size_t k = 1; k < scores->size(); ++k) {
    auto delta = DeltaQe((*scores)[0], (*scores)[k]);
    ASSERT_TRUE(delta.ok());
    EXPECT_GE(*delta, 0.0);
  }
  auto top = DeltaQe((*scores)[0], scores->back());
  EXPECT_GT(*top, 0.0);
}

TEST(ExperimentTest, IdentityCorrectorMatchesDirectTranslation) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  const auto variants = Variants(NoiseType::kSwap);
  const auto& top = variants.back();  // p = 1.0
  const auto copy = Mock("copy", SystemKind::kTranslator, {"echo"});
  const auto identity = Mock("identity", SystemKind::kCorrector, {"echo"});
  auto direct = TranslateCorpus(ctx, copy, top);
  auto piped = CorrectionPipeline(ctx, "sc-identity", identity, copy, top, Clean());
  ASSERT_TRUE(direct.ok() && piped.ok()) << piped.status();
  EXPECT_EQ(piped->outputs, direct->outputs);
  ASSERT_TRUE(piped->intrinsic_chrf.has_value());
  auto expected = CorpusChrf(Texts(top.source), Texts(Clean()));
  ASSERT_TRUE(expected.ok());
  EXPECT_DOUBLE_EQ(*piped->intrinsic_chrf, *expected);
  EXPECT_LT(*piped->intrinsic_chrf, 100.0);
  EXPECT_TRUE(std::filesystem::exists(ctx.RunDir("sc-identity", top.id) / "corrected.txt"));
}

TEST(ExperimentTest, OracleCorrectorFeedsCleanTextToTranslator) {
  testing::TempDir dir;
  RunContext ctx = Context(dir);
  MTNOISE_ASSERT_OK(WritePlainCorpus(Clean(), dir.path() / "clean.txt"));
  const auto variants = Variants(NoiseType::kKey);
  const auto capture = (dir.path() / "translator.jsonl").string();
  const auto copy = Mock("copy", SystemKind::kTranslator, {"--capture", capture, "echo"});
  const auto oracle = Mock("oracle", SystemKind::kCorrector,
                           {"oracle", "--clean", (dir.path() / "clean.txt").string()});
  auto piped = CorrectionPipeline(ctx, "sc-oracle", oracle, copy, variants.back(), Clean());
  ASSERT_TRUE(piped.ok()) << piped.status();
  EXPECT_EQ(piped->outputs, Texts(Clean()));
  EXPECT_DOUBLE_EQ(*piped->intrinsic_chrf, 100.0);
  auto lines = LoadPlainCorpus(capture);
  ASSERT_TRUE(lines.ok());
  for (size_t i = 0; i < lines->size(); ++i) {
    EXPECT_EQ(Json::parse((*lines)[i].text)["src"], Clean()[i].text);
  }
}

ScoreFile Scores(const std::vector<double>& v) {
  ScoreFile f{"s", "m", std::nullopt, {}};
  for (size_t i = 0; i < v.size(); ++i) f.rows.emplace_back(i, v[i]);
  return f;
}

TEST(OracleSelectTest, DominantSideWins) {
  auto sel = OracleSelect(Scores({3, 3, 3}), Scores({1, 2, 3}), {"a", "a", "a"},
                          {"b", "b", "b"});
  ASSERT_TRUE(sel.ok());
  EXPECT_EQ(sel->outputs, (std::vector<std::string>{"a", "a", "a"}));
  EXPECT_EQ(sel->chose_b, (std::vector<bool>{false, false, false}));
}

TEST(OracleSelectTest, AlternatingDominance) {
  auto sel = OracleSelect(Scores({1, 0, 1, 0}), Scores({0, 1, 0, 1}),
                          {"a0", "a1", "a2", "a3"}, {"b0", "b1", "b2", "b3"});
  ASSERT_TRUE(sel.ok());
  EXPECT_EQ(sel->outputs, (std::vector<std::string>{"a0", "b1", "a2", "b3"}));
  EXPECT_EQ(sel->chose_b, (std::vector<bool>{false, true, false, true}));
}

TEST(OracleSelectTest, ScoresAreElementwiseMax) {
  std::mt19937_64 gen(44);
  std::uniform_real_distribution<double> u(0, 100);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + gen() % 30;
    std::vector<double> a(n), b(n);
    std::vector<std::string> oa(n, "a"), ob(n, "b");
    for (size_t i = 0; i < n; ++i) {
      a[i] = u(gen);
      b[i] = (gen() % 5 == 0) ? a[i] : u(gen);
    }
    auto sel = OracleSelect(Scores(a), Scores(b), oa, ob);
    ASSERT_TRUE(sel.ok());
    for (size_t i = 0; i < n; ++i) {
      EXPECT_EQ(sel->scores.rows[i].second, std::max(a[i], b[i]));
    }
    EXPECT_GE(sel->scores.Mean(), Scores(a).Mean());
    EXPECT_GE(sel->scores.Mean(), Scores(b).Mean());
  }
}

TEST(OracleSelectTest, MismatchedInputsAreRejected) {
  EXPECT_FALSE(OracleSelect(Scores({1, 2}), Scores({1}), {"a", "a"}, {"b"}).ok());
}

// A small manifest over the toy corpus; commands resolve ${MOCK}.
std::string ToyManifest(const std::filesystem::path& source) {
  Json j;
  j["name"] = "toy";
  j["seed"] = 3;
  j["languages"] = {{"source", "en"}, {"target", "en"}};
  j["corpora"] = Json::array({{{"id", "toy"}, {"source", source.string()}}});
  j["noise"] = {{"types", {"swap", "drop"}}};
  j["systems"] = Json::array(
      {{{"id", "copy"}, {"kind", "translator"}, {"command", {"${MOCK}", "echo"}}},
       {{"id", "fix"}, {"kind", "corrector"}, {"command", {"${MOCK}", "echo"}}},
       {{"id", "qe"}, {"kind", "scorer"}, {"command", {"${MOCK}", "neg-edit"}}}});
  j["metrics"] = Json::array(
      {{{"name", "chrf"}, {"kind", "chrf"}, {"reference", "clean_source"}},
       {{"name", "qe"}, {"kind", "external"}, {"scorer", "qe"}}});
  j["pipelines"] = Json::array(
      {{{"id", "sc"}, {"corrector", "fix"}, {"translator", "copy"}}});
  j["oracles"] = Json::array(
      {{{"baseline", "copy"}, {"challenger", "sc"}, {"metric", "chrf"}}});
  return j.dump(2);
}

EnvLookup MockEnv() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (name == "MOCK") return std::string(MTNOISE_MOCK_PATH);
    return std::nullopt;
  };
}

TEST(ExperimentSpecTest, ParsesToyManifest) {
  testing::TempDir dir;
  auto spec = ParseExperimentSpec(ToyManifest("toy.txt"), dir.path(), MockEnv());
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->levels.size(), 10u);
  EXPECT_EQ(spec->systems[0].command[0], MTNOISE_MOCK_PATH);
  EXPECT_EQ(spec->corpora[0].source, dir.path() / "toy.txt");
  EXPECT_EQ(spec->oracles[0].id, "oracle.copy.sc");
}

TEST(ExperimentSpecTest, ManifestDirDefaultsToBaseDir) {
  testing::TempDir dir;
  Json j = Json::parse(ToyManifest("toy.txt"));
  j["systems"][0]["command"] = {"${MOCK}", "oracle", "--clean", "${MANIFEST_DIR}/c.txt"};
  auto spec = ParseExperimentSpec(j.dump(), dir.path(), MockEnv());
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->systems[0].command[3], (dir.path() / "c.txt").string());
}

TEST(ExperimentSpecTest, RejectsBadManifests) {
  testing::TempDir dir;
  const Json good = Json::parse(ToyManifest("toy.txt"));
  auto reject = [&](Json j) {
    return !ParseExperimentSpec(j.dump(), dir.path(), MockEnv()).ok();
  };
  Json j = good;
  j["surprise"] = 1;
  EXPECT_TRUE(reject(j));
  j = good;
  j["systems"][0]["command"][0] = "${UNSET_VARIABLE}";
  EXPECT_TRUE(reject(j));
  j = good;
  j["oracles"][0]["metric"] = "bleu";
  EXPECT_TRUE(reject(j));
  j = good;
  j["noise"]["types"] = {"key"};
  EXPECT_TRUE(reject(j));  // key without a layout
  j = good;
  j["metrics"][0]["reference"] = "target";
  EXPECT_TRUE(reject(j));  // corpus has no target
  j = good;
  j["pipelines"][0]["translator"] = "fix";
  EXPECT_TRUE(reject(j));  // wrong kind
  EXPECT_FALSE(ParseExperimentSpec("{", dir.path(), MockEnv()).ok());
}

TEST(RunExperimentTest, EndToEndAndResume) {
  testing::TempDir dir;
  MTNOISE_ASSERT_OK(WritePlainCorpus(Clean(), dir.path() / "toy.txt"));
  auto spec = ParseExperimentSpec(ToyManifest("toy.txt"), dir.path(), MockEnv());
  ASSERT_TRUE(spec.ok());
  ExperimentOptions options;
  options.runs_root = dir.path() / "runs";
  auto summary = RunExperiment(*spec, options);
  ASSERT_TRUE(summary.ok()) << summary.status();
  EXPECT_GT(summary->runs_executed, 0);
  EXPECT_GT(summary->external_calls, 0);

  auto trajectories = CollectTrajectories(summary->experiment_dir);
  ASSERT_TRUE(trajectories.ok());
  bool found = false;
  for (const auto& t : *trajectories) {
    if (t.system != "copy" || t.metric != "chrf") continue;
    found = true;
    ASSERT_EQ(t.points.size(), 10u);
    EXPECT_LT(FitSlope(t)->slope, 0.0);
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(std::filesystem::exists(summary->experiment_dir / "report/report.csv"));
  auto winloss = CollectWinLoss(summary->experiment_dir, "copy", "sc", "chrf", 0.0);
  ASSERT_TRUE(winloss.ok());
  EXPECT_EQ(winloss->size(), 21u);  // clean + 2 noise types x 10 levels
  EXPECT_EQ(winloss->front().noise_type, "clean");

  auto again = RunExperiment(*spec, options);
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(again->external_calls, 0);
  EXPECT_EQ(again->runs_executed, 0);
}

TEST(RunExperimentTest, MissingDirectoryHasNoTrajectories) {
  auto t = CollectTrajectories("/nonexistent/mtnoise/experiment");
  ASSERT_TRUE(t.ok());
  EXPECT_TRUE(t->empty());
}

}  // namespace
}  // namespace mtnoise
