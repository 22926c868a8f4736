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

#include "mtnoise/noise.h"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/perturb.h"
#include "mtnoise/rng.h"
#include "noise_invariants.h"

namespace mtnoise {
namespace {

const KeyboardLayout* Qwerty() { return *BuiltinLayout("qwerty"); }

TEST(RngTest, SameTripleSameStream) {
  RandomStream a = DeriveTokenStream(5, 3, 9);
  RandomStream b = DeriveTokenStream(5, 3, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Next(), b.Next());
}

TEST(RngTest, NeighbouringTriplesDoNotCollide) {
  std::set<uint64_t> first_draws;
  for (uint64_t s = 0; s < 10; ++s) {
    for (uint64_t seg = 0; seg < 100; ++seg) {
      for (uint64_t tok = 0; tok < 100; ++tok) {
        first_draws.insert(DeriveTokenStream(s, seg, tok).Next());
      }
    }
  }
  EXPECT_EQ(first_draws.size(), 100000u);
}

TEST(RngTest, UniformBelowIsUnbiased) {
  RandomStream rng(42);
  int counts[3] = {0, 0, 0};
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) ++counts[rng.UniformBelow(3)];
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(kDraws), 1.0 / 3, 0.01);
}

TEST(PerturbTest, ForcedSwap) {
  EXPECT_EQ(ApplySwap(U"abc", 0), U"bac");
  RandomStream rng(1);
  auto p = PerturbSwap(U"at", rng);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->token, U"ta");
  EXPECT_FALSE(PerturbSwap(U"a", rng));
}

TEST(PerturbTest, SwapPositionsAreUniform) {
  RandomStream rng(77);
  int counts[3] = {0, 0, 0};
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) ++counts[PerturbSwap(U"abcd", rng)->position];
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(kDraws), 1.0 / 3, 0.01);
}

TEST(PerturbTest, ForcedDupe) {
  EXPECT_EQ(ApplyDupe(U"ab", 1), U"abb");
  RandomStream rng(1);
  EXPECT_EQ(PerturbDupe(U"x", rng)->token, U"xx");
}

TEST(PerturbTest, ForcedDrop) {
  EXPECT_EQ(ApplyDrop(U"ab", 0), U"b");
  EXPECT_EQ(ApplyDrop(U"noise", 2), U"nose");
}

TEST(PerturbTest, DropYieldsSubsequence) {
  RandomStream rng(3);
  const std::u32string token = U"subsequence";
  for (int i = 0; i < 1000; ++i) {
    const std::u32string out = PerturbDrop(token, rng)->token;
    size_t j = 0;
    for (char32_t c : token) {
      if (j < out.size() && out[j] == c) ++j;
    }
    EXPECT_EQ(j, out.size());
  }
}

TEST(PerturbTest, ForcedKeyPreservesCase) {
  EXPECT_EQ(ApplyKey(U"cat", 1, U's', *Qwerty()).token, U"cst");
  const KeyboardLayout* qwertz = *BuiltinLayout("qwertz");
  EXPECT_EQ(ApplyKey(U"Zoo", 0, U't', *qwertz).token, U"Too");
}

TEST(PerturbTest, KeyOnUnmappedCharactersIsNoOp) {
  RandomStream rng(1);
  EXPECT_FALSE(PerturbKey(U"12", rng, *Qwerty()));
}

TEST(PerturbTest, KeyHangulEditsJamoAndRecomposes) {
  const KeyboardLayout* dubeolsik = *BuiltinLayout("dubeolsik");
  RandomStream rng(9);
  auto p = PerturbKey(U"한", rng, *dubeolsik);
  ASSERT_TRUE(p);
  EXPECT_NE(p->token, U"한");
  EXPECT_EQ(hangul::Compose(hangul::Decompose(p->token)), p->token);
}

TEST(NoiseTest, ZeroRateIsIdentity) {
  auto corpus = testing::FuzzCorpus(2000, 1);
  for (NoiseType type : kAllNoiseTypes) {
    auto noised = NoiseCorpus(corpus, {type, 0.0, 5, Qwerty()}, "z");
    ASSERT_TRUE(noised.ok());
    for (size_t i = 0; i < corpus.size(); ++i) {
      EXPECT_EQ(noised->segments[i].text, corpus[i].text);
      EXPECT_TRUE(noised->segments[i].perturbations.empty());
    }
  }
}

TEST(NoiseTest, FullRateSwapsEveryToken) {
  auto out = NoiseSegment({0, "ab cd"}, {NoiseType::kSwap, 1.0, 0, nullptr});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->text, "ba dc");
  EXPECT_EQ(out->records.size(), 2u);
}

TEST(NoiseTest, KeyWithoutLayoutIsRejected) {
  EXPECT_FALSE(ValidateNoiseSpec({NoiseType::kKey, 0.5, 0, nullptr}).ok());
  EXPECT_FALSE(ValidateNoiseSpec({NoiseType::kSwap, 1.5, 0, nullptr}).ok());
}

TEST(NoiseTest, InvariantsHoldOnFuzzCorpus) {
  auto corpus = testing::FuzzCorpus(20000, 2);
  for (NoiseType type : kAllNoiseTypes) {
    for (double p : {0.0, 0.3, 1.0}) {
      auto noised = NoiseCorpus(corpus, {type, p, 11, Qwerty()}, "fuzz");
      ASSERT_TRUE(noised.ok());
      EXPECT_EQ(testing::CountNoiseViolations(corpus, *noised, type, p, Qwerty()), 0)
          << NoiseTypeName(type) << " p=" << p;
      EXPECT_TRUE(VerifyReplay(corpus, *noised).ok());
    }
  }
}

TEST(NoiseTest, AttemptRateConcentrates) {
  auto corpus = testing::FuzzCorpus(100000, 3);
  auto noised = NoiseCorpus(corpus, {NoiseType::kDupe, 0.3, 17, nullptr}, "c");
  ASSERT_TRUE(noised.ok());
  const NoiseStats stats = ComputeNoiseStats(corpus, *noised);
  EXPECT_EQ(stats.tokens, 100000);
  EXPECT_NEAR(stats.AttemptedRate(), 0.3, 0.005);
}

TEST(NoiseTest, OutputIndependentOfJobs) {
  auto corpus = testing::FuzzCorpus(5000, 4);
  auto one = NoiseCorpus(corpus, {NoiseType::kKey, 0.5, 8, Qwerty()}, "j", 1);
  auto many = NoiseCorpus(corpus, {NoiseType::kKey, 0.5, 8, Qwerty()}, "j", 8);
  ASSERT_TRUE(one.ok() && many.ok());
  EXPECT_EQ(*one, *many);
}

TEST(NoiseTest, ProvenanceRecordsLayoutChecksum) {
  auto noised = NoiseCorpus(MakeSegments({"abc"}), {NoiseType::kKey, 1.0, 8, Qwerty()}, "b");
  ASSERT_TRUE(noised.ok());
  EXPECT_EQ(noised->noise.base, "b");
  EXPECT_EQ(noised->noise.kind, "key");
  EXPECT_EQ(noised->noise.layout_sha256, Qwerty()->sha256());
}

TEST(LadderTest, EmptyCorpusGivesTenEmptyLevels) {
  auto ladder = MakeNoiseLadder({}, NoiseType::kSwap, nullptr, 1, "e");
  ASSERT_TRUE(ladder.ok());
  ASSERT_EQ(ladder->size(), 10u);
  for (const auto& level : *ladder) EXPECT_TRUE(level.segments.empty());
}

TEST(LadderTest, DeterministicAndMonotone) {
  auto corpus = testing::FuzzCorpus(10000, 5);
  auto a = MakeNoiseLadder(corpus, NoiseType::kDrop, nullptr, 21, "m");
  auto b = MakeNoiseLadder(corpus, NoiseType::kDrop, nullptr, 21, "m", 4);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);
  double previous = -1;
  for (int k = 0; k < 10; ++k) {
    EXPECT_DOUBLE_EQ((*a)[k].noise.p, LadderLevelP(k + 1));
    const double rate = ComputeNoiseStats(corpus, (*a)[k]).AttemptedRate();
    EXPECT_GT(rate, previous);
    previous = rate;
  }
}

TEST(LadderTest, LevelSeedsDoNotDependOnType) {
  auto corpus = MakeSegments({"alpha beta gamma delta"});
  auto swap = MakeNoiseLadder(corpus, NoiseType::kSwap, nullptr, 4, "t");
  auto drop = MakeNoiseLadder(corpus, NoiseType::kDrop, nullptr, 4, "t");
  ASSERT_TRUE(swap.ok() && drop.ok());
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ((*swap)[k].noise.seed, (*drop)[k].noise.seed);
    EXPECT_EQ((*swap)[k].noise.seed, LadderLevelSeed(4, k + 1));
  }
}

TEST(ReplayTest, DetectsTampering) {
  auto corpus = MakeSegments({"replay this sentence"});
  auto noised = NoiseCorpus(corpus, {NoiseType::kSwap, 1.0, 2, nullptr}, "r");
  ASSERT_TRUE(noised.ok());
  EXPECT_TRUE(VerifyReplay(corpus, *noised).ok());
  noised->segments[0].text += "x";
  EXPECT_FALSE(VerifyReplay(corpus, *noised).ok());
}

}  // namespace
}  // namespace mtnoise
