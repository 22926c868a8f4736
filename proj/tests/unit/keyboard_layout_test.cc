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

#include "mtnoise/keyboard_layout.h"

#include <algorithm>
#include <string>

#include "gtest/gtest.h"

namespace mtnoise {
namespace {

bool Contains(const std::vector<char32_t>& v, char32_t c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

TEST(KeyboardLayoutTest, BuiltinsParseAndMatchDerivedAdjacency) {
  for (const std::string& name : BuiltinLayoutNames()) {
    auto layout = BuiltinLayout(name);
    ASSERT_TRUE(layout.ok()) << name << ": " << layout.status();
    EXPECT_EQ((*layout)->adjacency(), (*layout)->DeriveAdjacency()) << name;
    EXPECT_EQ((*layout)->sha256().size(), 64u);
  }
}

TEST(KeyboardLayoutTest, AdjacencyIsSymmetric) {
  for (const std::string& name : BuiltinLayoutNames()) {
    auto layout = BuiltinLayout(name);
    ASSERT_TRUE(layout.ok());
    for (const auto& [key, neighbors] : (*layout)->adjacency()) {
      EXPECT_FALSE(Contains(neighbors, key)) << name;
      for (char32_t n : neighbors) {
        const auto* back = (*layout)->Neighbors(n);
        ASSERT_NE(back, nullptr);
        EXPECT_TRUE(Contains(*back, key)) << name;
      }
    }
  }
}

TEST(KeyboardLayoutTest, QwertyNeighbours) {
  auto layout = BuiltinLayout("qwerty");
  ASSERT_TRUE(layout.ok());
  const auto* a = (*layout)->Neighbors(U'a');
  ASSERT_NE(a, nullptr);
  EXPECT_TRUE(Contains(*a, U's'));
  EXPECT_TRUE(Contains(*a, U'q'));
  EXPECT_FALSE(Contains(*a, U'p'));
  EXPECT_EQ((*layout)->Neighbors(U'1'), nullptr);
}

TEST(KeyboardLayoutTest, QwertzPlacesZBesideT) {
  auto layout = BuiltinLayout("qwertz");
  ASSERT_TRUE(layout.ok());
  const auto* z = (*layout)->Neighbors(U'z');
  ASSERT_NE(z, nullptr);
  EXPECT_TRUE(Contains(*z, U't'));
}

TEST(KeyboardLayoutTest, FormatParsesBack) {
  auto layout = BuiltinLayout("azerty");
  ASSERT_TRUE(layout.ok());
  auto reparsed = KeyboardLayout::Parse((*layout)->Format());
  ASSERT_TRUE(reparsed.ok()) << reparsed.status();
  EXPECT_EQ(reparsed->adjacency(), (*layout)->adjacency());
}

TEST(KeyboardLayoutTest, LoadsFromFile) {
  auto layout = KeyboardLayout::Load(std::string(MTNOISE_LAYOUT_DIR) +
                                     "/dubeolsik.layout");
  ASSERT_TRUE(layout.ok()) << layout.status();
  EXPECT_EQ(layout->script(), KeyboardLayout::Script::kHangul);
  auto builtin = BuiltinLayout("dubeolsik");
  ASSERT_TRUE(builtin.ok());
  EXPECT_EQ(layout->sha256(), (*builtin)->sha256());
}

TEST(KeyboardLayoutTest, RejectsAsymmetricAdjacency) {
  auto builtin = BuiltinLayoutSource("qwerty");
  ASSERT_TRUE(builtin.ok());
  std::string text(*builtin);
  // Give q a one-sided edge to p.
  const size_t at = text.find("q: w a s\n");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 9, "q: w a s p\n");
  EXPECT_FALSE(KeyboardLayout::Parse(text).ok());
}

TEST(KeyboardLayoutTest, UnknownBuiltinIsNotFound) {
  EXPECT_FALSE(BuiltinLayout("dvorak-xyz").ok());
}

TEST(KeyboardLayoutTest, CaseHelpers) {
  EXPECT_EQ(FoldCase(U'Q'), U'q');
  EXPECT_EQ(ToUpper(U'é'), U'É');
  EXPECT_TRUE(IsUpper(U'Z'));
  EXPECT_FALSE(IsUpper(U'z'));
}

}  // namespace
}  // namespace mtnoise
