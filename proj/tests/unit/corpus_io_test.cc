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

#include "mtnoise/corpus_io.h"

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mtnoise/file_util.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/noise.h"
#include "test_util.h"

namespace mtnoise {
namespace {

TEST(PlainCorpusTest, SplitsLines) {
  auto corpus = ParsePlainCorpus("a\nb\n");
  ASSERT_TRUE(corpus.ok());
  EXPECT_EQ(*corpus, (std::vector<Segment>{{0, "a"}, {1, "b"}}));
}

TEST(PlainCorpusTest, EmptyFileHasNoSegments) {
  auto corpus = ParsePlainCorpus("");
  ASSERT_TRUE(corpus.ok());
  EXPECT_TRUE(corpus->empty());
}

TEST(PlainCorpusTest, KeepsEmptyLines) {
  auto corpus = ParsePlainCorpus("a\n\nb\n");
  ASSERT_TRUE(corpus.ok());
  ASSERT_EQ(corpus->size(), 3u);
  EXPECT_EQ((*corpus)[1].text, "");
}

TEST(PlainCorpusTest, RejectsInvalidUtf8) {
  EXPECT_FALSE(ParsePlainCorpus("ok\nbad\xFF\n").ok());
}

TEST(PlainCorpusTest, FormatRoundTrips) {
  const std::vector<Segment> segments = MakeSegments({"x", "", "ß y"});
  auto parsed = ParsePlainCorpus(FormatPlainCorpus(segments));
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, segments);
  EXPECT_EQ(FormatPlainCorpus({}), "");
}

TEST(ParallelCorpusTest, RejectsLengthMismatch) {
  testing::TempDir dir;
  MTNOISE_ASSERT_OK(WriteFileAtomic(dir.path() / "s.txt", "a\nb\n"));
  MTNOISE_ASSERT_OK(WriteFileAtomic(dir.path() / "t.txt", "a\n"));
  EXPECT_FALSE(
      LoadParallelCorpus(dir.path() / "s.txt", dir.path() / "t.txt", {"en", "de"})
          .ok());
}

TEST(LexNormTest, JoinsTokensPerSentence) {
  auto pairs = ParseLexNormCorpus("u\tyou\n2\tto\n\n");
  ASSERT_TRUE(pairs.ok());
  ASSERT_EQ(pairs->size(), 1u);
  EXPECT_EQ((*pairs)[0].raw.text, "u 2");
  EXPECT_EQ((*pairs)[0].normalized.text, "you to");
}

TEST(LexNormTest, IdentityNormalization) {
  auto pairs = ParseLexNormCorpus("ok\tok\n\n");
  ASSERT_TRUE(pairs.ok());
  ASSERT_EQ(pairs->size(), 1u);
  EXPECT_EQ((*pairs)[0].raw.text, "ok");
  EXPECT_EQ((*pairs)[0].normalized.text, "ok");
}

TEST(LexNormTest, EmptyNormalizationDeletesToken) {
  auto pairs = ParseLexNormCorpus("lol\t\ngo\tgo\n\n");
  ASSERT_TRUE(pairs.ok());
  ASSERT_EQ(pairs->size(), 1u);
  EXPECT_EQ((*pairs)[0].raw.text, "lol go");
  EXPECT_EQ((*pairs)[0].normalized.text, "go");
}

TEST(LexNormTest, MalformedLineIsAnError) {
  auto pairs = ParseLexNormCorpus("no-tab-here\n\n");
  ASSERT_FALSE(pairs.ok());
}

TEST(NoisedJsonlTest, EmptyCorpusHasNoLines) {
  NoisedCorpus corpus;
  corpus.noise.base = "empty";
  corpus.noise.kind = "swap";
  EXPECT_EQ(FormatNoisedJsonl(corpus), "");
}

TEST(NoisedJsonlTest, SingleSegmentRoundTripsByteIdentically) {
  NoiseSpec spec{NoiseType::kSwap, 1.0, 7, nullptr};
  auto noised = NoiseCorpus(MakeSegments({"hello world"}), spec, "one");
  ASSERT_TRUE(noised.ok());
  const std::string text = FormatNoisedJsonl(*noised);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  auto parsed = ParseNoisedJsonl(text);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, *noised);
  EXPECT_EQ(FormatNoisedJsonl(*parsed), text);
}

TEST(NoisedJsonlTest, RandomCorporaRoundTrip) {
  auto layout = BuiltinLayout("qwerty");
  ASSERT_TRUE(layout.ok());
  std::mt19937_64 gen(11);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::vector<std::string> lines;
  for (int i = 0; i < 1000; ++i) {
    std::string line;
    const int words = static_cast<int>(gen() % 8);
    for (int w = 0; w < words; ++w) {
      if (w) line += ' ';
      const int len = 1 + static_cast<int>(gen() % 7);
      for (int c = 0; c < len; ++c) line += alphabet[gen() % alphabet.size()];
    }
    lines.push_back(line);
  }
  for (NoiseType type : kAllNoiseTypes) {
    NoiseSpec spec{type, 0.5, 99, *layout};
    auto noised = NoiseCorpus(MakeSegments(lines), spec, "rand");
    ASSERT_TRUE(noised.ok());
    auto parsed = ParseNoisedJsonl(FormatNoisedJsonl(*noised));
    ASSERT_TRUE(parsed.ok()) << parsed.status();
    EXPECT_EQ(*parsed, *noised);
  }
}

TEST(NoisedJsonlTest, FileRoundTrip) {
  testing::TempDir dir;
  NoiseSpec spec{NoiseType::kDrop, 0.5, 3, nullptr};
  auto noised = NoiseCorpus(MakeSegments({"one two", "three"}), spec, "f");
  ASSERT_TRUE(noised.ok());
  MTNOISE_ASSERT_OK(WriteNoisedJsonl(*noised, dir.path() / "n.jsonl"));
  auto read = ReadNoisedJsonl(dir.path() / "n.jsonl");
  ASSERT_TRUE(read.ok());
  EXPECT_EQ(*read, *noised);
}

TEST(NoisedJsonlTest, RejectsGarbage) {
  EXPECT_FALSE(ParseNoisedJsonl("{not json}\n").ok());
}

TEST(ScoreFileTest, RoundTrips) {
  ScoreFile file{"sys", "chrf", std::nullopt, {{0, 0.5}, {1, 1.0 / 3.0}}};
  auto parsed = ParseScoreFile(FormatScoreFile(file));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, file);
  EXPECT_DOUBLE_EQ(file.Mean(), (0.5 + 1.0 / 3.0) / 2);
}

TEST(ScoreFileTest, FormatDoubleRoundTripsExactly) {
  for (double v : {0.1, 1.0 / 3.0, -72.97, 1e-300, 100.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

}  // namespace
}  // namespace mtnoise
