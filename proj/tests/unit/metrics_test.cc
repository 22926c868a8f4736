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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "metric_fixture.h"
#include "mtnoise/bleu.h"
#include "mtnoise/chrf.h"
#include "mtnoise/corpus.h"
#include "mtnoise/quality.h"
#include "mtnoise/tokenization.h"

namespace mtnoise {
namespace {

constexpr double kOracleTolerance = 1e-6;

class MetricFixtureTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto f = testing::LoadMetricFixture();
    ASSERT_TRUE(f.ok()) << f.status();
    fixture_ = *std::move(f);
    ASSERT_EQ(fixture_.pairs.size(), 50u);
  }
  testing::MetricFixture fixture_;
};

TEST_F(MetricFixtureTest, SentenceChrfMatchesReference) {
  for (const auto& p : fixture_.pairs) {
    EXPECT_NEAR(SentenceChrf(p.hyp, p.ref), p.chrf, kOracleTolerance)
        << p.hyp << " | " << p.ref;
  }
}

TEST_F(MetricFixtureTest, SentenceChrfPlusPlusMatchesReference) {
  ChrfParams params;
  params.word_order = 2;
  for (const auto& p : fixture_.pairs) {
    EXPECT_NEAR(SentenceChrf(p.hyp, p.ref, params), p.chrf_pp, kOracleTolerance)
        << p.hyp << " | " << p.ref;
  }
}

TEST_F(MetricFixtureTest, CorpusChrfMatchesReference) {
  auto chrf = CorpusChrf(fixture_.Hyps(), fixture_.Refs());
  ASSERT_TRUE(chrf.ok());
  EXPECT_NEAR(*chrf, fixture_.corpus_chrf, kOracleTolerance);
  ChrfParams params;
  params.word_order = 2;
  auto chrf_pp = CorpusChrf(fixture_.Hyps(), fixture_.Refs(), params, 4);
  ASSERT_TRUE(chrf_pp.ok());
  EXPECT_NEAR(*chrf_pp, fixture_.corpus_chrf_pp, kOracleTolerance);
}

TEST_F(MetricFixtureTest, SentenceBleuMatchesReference) {
  BleuParams params;
  params.effective_order = true;
  for (const auto& p : fixture_.pairs) {
    EXPECT_NEAR(SentenceBleu(p.hyp, p.ref, params), p.bleu, kOracleTolerance)
        << p.hyp << " | " << p.ref;
  }
}

TEST_F(MetricFixtureTest, CorpusBleuMatchesReference) {
  auto bleu = CorpusBleu(fixture_.Hyps(), fixture_.Refs());
  ASSERT_TRUE(bleu.ok());
  EXPECT_NEAR(*bleu, fixture_.corpus_bleu, kOracleTolerance);
  BleuParams chars;
  chars.tokenizer = BleuTokenizer::kChar;
  auto bleu_char = CorpusBleu(fixture_.Hyps(), fixture_.Refs(), chars);
  ASSERT_TRUE(bleu_char.ok());
  EXPECT_NEAR(*bleu_char, fixture_.corpus_bleu_char, kOracleTolerance);
}

TEST(ChrfTest, IdenticalAndDisjoint) {
  EXPECT_DOUBLE_EQ(SentenceChrf("the same words", "the same words"), 100.0);
  EXPECT_DOUBLE_EQ(SentenceChrf("abc", "xyz"), 0.0);
}

TEST(ChrfTest, IgnoresWhitespaceByDefault) {
  EXPECT_DOUBLE_EQ(SentenceChrf("ab cd", "abcd"), 100.0);
}

TEST(ChrfTest, LongOrdersUseTheUnpackedPath) {
  ChrfParams params;
  params.char_order = 9;
  EXPECT_DOUBLE_EQ(SentenceChrf("abcdefghij", "abcdefghij", params), 100.0);
  EXPECT_LT(SentenceChrf("abcdefghij", "abcdefghji", params), 100.0);
}

TEST(ChrfTest, RejectsBadParams) {
  EXPECT_FALSE(ValidateChrfParams({0, 0, 2.0, false, true}).ok());
  EXPECT_FALSE(ValidateChrfParams({6, 0, 0.0, false, true}).ok());
}

TEST(BleuTest, CorpusEdgeCases) {
  const std::vector<std::string> refs = {"a b c d", "e f g h"};
  auto same = CorpusBleu(refs, refs);
  ASSERT_TRUE(same.ok());
  EXPECT_NEAR(*same, 100.0, 1e-9);
  auto empty = CorpusBleu({"", ""}, refs);
  ASSERT_TRUE(empty.ok());
  EXPECT_DOUBLE_EQ(*empty, 0.0);
  EXPECT_FALSE(CorpusBleu({"a"}, refs).ok());
}

TEST(TokenF1Test, Examples) {
  EXPECT_DOUBLE_EQ(TokenF1({"a", "b"}, {"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(TokenF1({"a"}, {"b"}), 0.0);
  EXPECT_NEAR(TokenF1({"a", "a", "b"}, {"a", "c"}), 0.4, 1e-12);
}

TEST(FertilityTest, WhitespaceAndCharacters) {
  const auto corpus = MakeSegments({"ab cd", "the quick brown fox"});
  auto words = Fertility(corpus, WhitespacePieces);
  ASSERT_TRUE(words.ok());
  EXPECT_DOUBLE_EQ(*words, 1.0);
  auto chars = Fertility(MakeSegments({"ab cd"}), CharPieces);
  ASSERT_TRUE(chars.ok());
  EXPECT_DOUBLE_EQ(*chars, 2.0);
}

TEST(FertilityTest, ToyBpeMerge) {
  auto model = BpeModel::Parse("#version: 0.2\na b\n");
  ASSERT_TRUE(model.ok());
  EXPECT_EQ(model->EncodeWord("ab"), (std::vector<std::string>{"ab"}));
  auto f = Fertility(MakeSegments({"ab ab"}),
                     [&](std::string_view s) { return model->Encode(s); });
  ASSERT_TRUE(f.ok());
  EXPECT_DOUBLE_EQ(*f, 1.0);
}

TEST(FertilityTest, MergesApplyByRank) {
  auto model = BpeModel::Parse("b c\na b\nab c\n");
  ASSERT_TRUE(model.ok());
  // "b c" outranks "a b", so "abc" -> a + bc, and "ab c" never fires.
  EXPECT_EQ(model->EncodeWord("abc"), (std::vector<std::string>{"a", "bc"}));
}

ScoreFile Scores(std::vector<double> v, std::string system = "s") {
  ScoreFile f;
  f.system = std::move(system);
  f.metric = "qe";
  for (size_t i = 0; i < v.size(); ++i) f.rows.emplace_back(i, v[i]);
  return f;
}

TEST(DeltaQeTest, Examples) {
  auto same = DeltaQe(Scores({0.3, 0.7}), Scores({0.3, 0.7}));
  ASSERT_TRUE(same.ok());
  EXPECT_EQ(*same, 0.0);
  auto constant = DeltaQe(Scores({0.85, 0.85, 0.85}), Scores({0.80, 0.80, 0.80}));
  ASSERT_TRUE(constant.ok());
  EXPECT_NEAR(*constant, 0.05, 1e-12);
}

TEST(DeltaQeTest, RandomFilesMatchDirectSummationAndAntisymmetry) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + gen() % 50), b(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = u(gen);
      b[i] = u(gen);
    }
    double direct = 0;
    for (size_t i = 0; i < a.size(); ++i) direct += a[i] - b[i];
    direct /= static_cast<double>(a.size());
    auto ab = DeltaQe(Scores(a), Scores(b));
    auto ba = DeltaQe(Scores(b), Scores(a));
    ASSERT_TRUE(ab.ok() && ba.ok());
    EXPECT_NEAR(*ab, direct, 1e-12);
    EXPECT_EQ(*ab, -*ba);
  }
}

TEST(DeltaQeTest, MisalignedFilesAreRejected) {
  ScoreFile shifted = Scores({0.1});
  shifted.rows[0].first = 4;
  EXPECT_FALSE(DeltaQe(Scores({0.1}), shifted).ok());
}

TEST(FauxMetricTest, Examples) {
  const std::vector<std::string> y = {"a small test", "another one"};
  auto bleu = FauxMetric(y, y, FauxBase::kBleu);
  ASSERT_TRUE(bleu.ok());
  EXPECT_NEAR(*bleu, 100.0, 1e-9);
  auto chrf = FauxMetric({"", ""}, y, FauxBase::kChrf);
  ASSERT_TRUE(chrf.ok());
  EXPECT_DOUBLE_EQ(*chrf, 0.0);
  const std::vector<std::string> n = {"a smal test", "anther one"};
  auto faux = FauxMetric(n, y, FauxBase::kBleu);
  auto direct = CorpusBleu(n, y);
  ASSERT_TRUE(faux.ok() && direct.ok());
  EXPECT_EQ(*faux, *direct);
}

}  // namespace
}  // namespace mtnoise
