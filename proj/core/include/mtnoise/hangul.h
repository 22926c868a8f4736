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

#ifndef MTNOISE_HANGUL_H_
#define MTNOISE_HANGUL_H_

#include <string>
#include <string_view>

namespace mtnoise::hangul {

inline constexpr char32_t kSyllableBase = 0xAC00;
inline constexpr char32_t kSyllableLast = 0xD7A3;
inline constexpr int kSyllableCount = 11172;

inline bool IsSyllable(char32_t cp) {
  return cp >= kSyllableBase && cp <= kSyllableLast;
}

// Compatibility jamo classification (U+3131..U+3163).
bool IsLeadingJamo(char32_t cp);   // can start a syllable
bool IsVowelJamo(char32_t cp);
bool IsTrailingJamo(char32_t cp);  // can close a syllable

// Expands each precomposed syllable into leading, vowel and optional
// trailing compatibility jamo using the Unicode arithmetic. Compound vowels
// and clusters (e.g. ㅘ, ㄳ) stay single jamo. Everything else passes
// through unchanged.
std::u32string Decompose(std::u32string_view text);

// Left-to-right greedy recomposition. A leading jamo followed by a vowel
// opens a syllable; a following trailing-capable jamo closes it unless it
// is itself followed by a vowel (then it starts the next syllable).
// Jamo that cannot be composed are kept literally.
std::u32string Compose(std::u32string_view jamo);

}  // namespace mtnoise::hangul

#endif  // MTNOISE_HANGUL_H_
