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

#include "mtnoise/dataset.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/file_util.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/noise.h"
#include "noise_invariants.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace mtnoise {
namespace {

const KeyboardLayout* Qwerty() { return *BuiltinLayout("qwerty"); }

MixSpec UniformMix(double rate, uint64_t seed = 31) {
  MixSpec mix;
  for (NoiseType t : kAllNoiseTypes) mix.rates[t] = rate;
  mix.seed = seed;
  mix.layout = Qwerty();
  return mix;
}

TEST(MixSpecTest, Validation) {
  EXPECT_TRUE(ValidateMixSpec(UniformMix(0.25)).ok());
  EXPECT_FALSE(ValidateMixSpec(UniformMix(0.3)).ok());  // sums past 1
  MixSpec no_layout = UniformMix(0.1);
  no_layout.layout = nullptr;
  EXPECT_FALSE(ValidateMixSpec(no_layout).ok());
  MixSpec negative;
  negative.rates[NoiseType::kSwap] = -0.1;
  EXPECT_FALSE(ValidateMixSpec(negative).ok());
}

TEST(MixSpecTest, ParsesRates) {
  auto rates = ParseMixRates("swap=0.15,dupe=0.15,drop=0.15,key=0.15");
  ASSERT_TRUE(rates.ok());
  EXPECT_EQ(rates->size(), 4u);
  EXPECT_DOUBLE_EQ(rates->at(NoiseType::kKey), 0.15);
  EXPECT_FALSE(ParseMixRates("swap=x").ok());
  EXPECT_FALSE(ParseMixRates("typo=0.1").ok());
  EXPECT_FALSE(ParseMixRates("swap=0.1,swap=0.2").ok());
}

TEST(MixNoiseTest, ZeroRatesAreIdentity) {
  const auto corpus = testing::FuzzCorpus(2000, 1);
  auto noised = MixNoise(corpus, UniformMix(0.0), "z");
  ASSERT_TRUE(noised.ok());
  for (size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(noised->segments[i].text, corpus[i].text);
  }
}

TEST(MixNoiseTest, SingleFullRateEqualsSingleTypeNoise) {
  const auto corpus = testing::FuzzCorpus(3000, 2);
  MixSpec mix;
  mix.rates[NoiseType::kSwap] = 1.0;
  mix.seed = 17;
  auto mixed = MixNoise(corpus, mix, "m");
  auto single = NoiseCorpus(corpus, {NoiseType::kSwap, 1.0, 17, nullptr}, "m");
  ASSERT_TRUE(mixed.ok() && single.ok());
  EXPECT_EQ(mixed->segments, single->segments);
  EXPECT_EQ(mixed->noise.kind, "mix");
}

TEST(MixNoiseTest, CategoricalRatesConcentrate) {
  const auto corpus = testing::FuzzCorpus(100000, 3);
  auto noised = MixNoise(corpus, UniformMix(0.15), "c", 4);
  ASSERT_TRUE(noised.ok());
  const NoiseStats stats = ComputeNoiseStats(corpus, *noised);
  EXPECT_NEAR(stats.AttemptedRate(), 0.60, 0.006);
  for (NoiseType t : kAllNoiseTypes) {
    const double rate = static_cast<double>(
                            stats.attempted_by_type.at(std::string(NoiseTypeName(t)))) /
                        stats.tokens;
    EXPECT_NEAR(rate, 0.15, 0.004) << NoiseTypeName(t);
  }
  EXPECT_TRUE(VerifyReplay(corpus, *noised).ok());
}

TEST(SubsampleTest, EdgeCases) {
  auto full = SubsampleIndices(100, 100, 5);
  ASSERT_TRUE(full.ok());
  std::vector<size_t> sorted = *full;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
  auto empty = SubsampleIndices(100, 0, 5);
  ASSERT_TRUE(empty.ok());
  EXPECT_TRUE(empty->empty());
  EXPECT_FALSE(SubsampleIndices(10, 11, 5).ok());
}

TEST(SubsampleTest, SizesFromOneSeedAreNestedPrefixes) {
  auto small = SubsampleIndices(20000, 100, 9);
  auto medium = SubsampleIndices(20000, 1000, 9);
  auto large = SubsampleIndices(20000, 20000, 9);
  ASSERT_TRUE(small.ok() && medium.ok() && large.ok());
  EXPECT_TRUE(std::equal(small->begin(), small->end(), medium->begin()));
  EXPECT_TRUE(std::equal(medium->begin(), medium->end(), large->begin()));
  EXPECT_EQ(std::set<size_t>(medium->begin(), medium->end()).size(), 1000u);
}

TEST(TrainingSetTest, CorrectionPairsReplayExactly) {
  const auto corpus = testing::FuzzCorpus(20000, 4);
  auto set = MakeCorrectionTrainingSet(corpus, UniformMix(0.15), 1000, "corr");
  ASSERT_TRUE(set.ok()) << set.status();
  ASSERT_EQ(set->pairs.size(), 1000u);
  for (const auto& pair : set->pairs) {
    EXPECT_EQ(pair.output.text, corpus[pair.output.index].text);
    auto replayed = ReplaySegment(pair.output.text, pair.perturbations, Qwerty());
    ASSERT_TRUE(replayed.ok());
    EXPECT_EQ(*replayed, pair.input.text);
  }
  EXPECT_TRUE(VerifyTrainingSet(*set, Qwerty()).ok());
}

TEST(TrainingSetTest, ZeroMixGivesIdenticalPairs) {
  const auto corpus = testing::FuzzCorpus(500, 5);
  auto set = MakeCorrectionTrainingSet(corpus, UniformMix(0.0), corpus.size(), "z");
  ASSERT_TRUE(set.ok());
  for (const auto& pair : set->pairs) EXPECT_EQ(pair.input.text, pair.output.text);
}

TEST(TrainingSetTest, MtSetNoisesSourceOnly) {
  ParallelCorpus corpus;
  corpus.source = MakeSegments({"the cat sat", "on the mat", "again and again"});
  corpus.target = MakeSegments({"le chat", "sur le tapis", "encore"});
  corpus.languages = {"en", "fr"};
  auto set = MakeMtTrainingSet(corpus, UniformMix(0.25), 3, "mt");
  ASSERT_TRUE(set.ok()) << set.status();
  for (const auto& pair : set->pairs) {
    EXPECT_EQ(pair.output.text, (*corpus.target)[pair.output.index].text);
  }
  corpus.target.reset();
  EXPECT_FALSE(MakeMtTrainingSet(corpus, UniformMix(0.25), 3, "mt").ok());
}

TEST(TrainingSetTest, DetectsTamperedPairs) {
  const auto corpus = testing::FuzzCorpus(2000, 6);
  auto set = MakeCorrectionTrainingSet(corpus, UniformMix(0.2), 50, "t");
  ASSERT_TRUE(set.ok());
  set->pairs[3].input.text += "!";
  EXPECT_FALSE(VerifyTrainingSet(*set, Qwerty()).ok());
}

TEST(TrainingSetTest, WritesFilesAndManifest) {
  testing::TempDir dir;
  const auto corpus = testing::FuzzCorpus(3000, 7);
  MTNOISE_ASSERT_OK(WritePlainCorpus(corpus, dir.path() / "src.txt"));
  auto set = MakeCorrectionTrainingSet(corpus, UniformMix(0.15), 40, "src");
  ASSERT_TRUE(set.ok());
  MTNOISE_ASSERT_OK(WriteTrainingSet(*set, dir.path() / "out", "train",
                                     {{"source", dir.path() / "src.txt"}}));
  auto input = LoadPlainCorpus(dir.path() / "out/train.input.txt");
  ASSERT_TRUE(input.ok());
  EXPECT_EQ(input->size(), 40u);
  auto manifest_text = ReadFile(dir.path() / "out/train.manifest.json");
  ASSERT_TRUE(manifest_text.ok());
  const auto manifest = nlohmann::json::parse(*manifest_text);
  EXPECT_EQ(manifest["task"], "correction");
  EXPECT_EQ(manifest["pairs"], 40);
  auto provenance = ReadNoisedJsonl(dir.path() / "out/train.provenance.jsonl");
  ASSERT_TRUE(provenance.ok()) << provenance.status();
  EXPECT_EQ(provenance->segments.size(), 40u);
}

TEST(ValidationSetTest, DoublesDevSetAndNoisesSecondHalf) {
  ParallelCorpus dev;
  dev.source = testing::FuzzCorpus(50000, 8);
  std::vector<std::string> targets;
  for (const auto& s : dev.source) targets.push_back("t" + std::to_string(s.index));
  dev.target = MakeSegments(targets);
  dev.languages = {"en", "de"};
  auto val = MakeValidationSet(dev, 3, Qwerty(), "dev");
  ASSERT_TRUE(val.ok()) << val.status();
  const size_t n = dev.source.size();
  ASSERT_EQ(val->corpus.source.size(), 2 * n);
  for (size_t i = 0; i < n; ++i) {
    EXPECT_EQ(val->corpus.source[i].text, dev.source[i].text);
    EXPECT_EQ((*val->corpus.target)[i + n].text, (*dev.target)[i].text);
  }
  EXPECT_TRUE(ValidateCorpus(val->corpus).ok());
  const NoiseStats stats = ComputeNoiseStats(dev.source, val->noised_half);
  EXPECT_NEAR(stats.AttemptedRate(), 4 * kValidationRate, 0.01);
}

}  // namespace
}  // namespace mtnoise
