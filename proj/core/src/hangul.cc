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

#include "mtnoise/hangul.h"

#include <array>

namespace mtnoise::hangul {
namespace {

constexpr int kVowelCount = 21;
constexpr int kTrailingCount = 28;  // including "no trailing"

constexpr std::array<char32_t, 19> kLeading = {
    0x3131, 0x3132, 0x3134, 0x3137, 0x3138, 0x3139, 0x3141,
    0x3142, 0x3143, 0x3145, 0x3146, 0x3147, 0x3148, 0x3149,
    0x314A, 0x314B, 0x314C, 0x314D, 0x314E};

constexpr char32_t kFirstVowel = 0x314F;

// Index 0 means "no trailing consonant".
constexpr std::array<char32_t, kTrailingCount> kTrailing = {
    0,      0x3131, 0x3132, 0x3133, 0x3134, 0x3135, 0x3136,
    0x3137, 0x3139, 0x313A, 0x313B, 0x313C, 0x313D, 0x313E,
    0x313F, 0x3140, 0x3141, 0x3142, 0x3144, 0x3145, 0x3146,
    0x3147, 0x3148, 0x314A, 0x314B, 0x314C, 0x314D, 0x314E};

int LeadingIndex(char32_t cp) {
  for (size_t i = 0; i < kLeading.size(); ++i) {
    if (kLeading[i] == cp) return static_cast<int>(i);
  }
  return -1;
}

int VowelIndex(char32_t cp) {
  if (cp >= kFirstVowel && cp < kFirstVowel + kVowelCount) {
    return static_cast<int>(cp - kFirstVowel);
  }
  return -1;
}

int TrailingIndex(char32_t cp) {
  for (size_t i = 1; i < kTrailing.size(); ++i) {
    if (kTrailing[i] == cp) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

bool IsLeadingJamo(char32_t cp) { return LeadingIndex(cp) >= 0; }
bool IsVowelJamo(char32_t cp) { return VowelIndex(cp) >= 0; }
bool IsTrailingJamo(char32_t cp) { return TrailingIndex(cp) >= 0; }

std::u32string Decompose(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size() * 3);
  for (char32_t cp : text) {
    if (!IsSyllable(cp)) {
      out.push_back(cp);
      continue;
    }
    const int s = static_cast<int>(cp - kSyllableBase);
    const int l = s / (kVowelCount * kTrailingCount);
    const int v = (s % (kVowelCount * kTrailingCount)) / kTrailingCount;
    const int t = s % kTrailingCount;
    out.push_back(kLeading[l]);
    out.push_back(kFirstVowel + v);
    if (t != 0) out.push_back(kTrailing[t]);
  }
  return out;
}

std::u32string Compose(std::u32string_view jamo) {
  std::u32string out;
  out.reserve(jamo.size());
  size_t i = 0;
  while (i < jamo.size()) {
    const int l = LeadingIndex(jamo[i]);
    const int v = i + 1 < jamo.size() ? VowelIndex(jamo[i + 1]) : -1;
    if (l < 0 || v < 0) {
      out.push_back(jamo[i++]);
      continue;
    }
    int t = 0;
    if (i + 2 < jamo.size()) {
      const int candidate = TrailingIndex(jamo[i + 2]);
      const bool starts_next =
          i + 3 < jamo.size() && VowelIndex(jamo[i + 3]) >= 0;
      if (candidate > 0 && !starts_next) t = candidate;
    }
    out.push_back(kSyllableBase +
                  static_cast<char32_t>((l * kVowelCount + v) * kTrailingCount + t));
    i += t ? 3 : 2;
  }
  return out;
}

}  // namespace mtnoise::hangul
