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

#ifndef MTNOISE_UTF8_H_
#define MTNOISE_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mtnoise {

// Decodes strict UTF-8 into Unicode scalar values. Overlong forms,
// surrogates and values above U+10FFFF are rejected; the error message
// carries the byte offset of the first bad sequence.
absl::StatusOr<std::u32string> DecodeUtf8(std::string_view bytes);

// Returns the byte offset of the first invalid sequence, or npos.
size_t FindInvalidUtf8(std::string_view bytes);

std::string EncodeUtf8(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string* out);

// Unicode White_Space plus the C0 separators U+001C..U+001F, i.e. the set
// Python's str.split() breaks on.
bool IsWhitespace(char32_t cp);

// A maximal run of non-whitespace code points inside a segment.
struct TokenView {
  std::u32string token;
  size_t begin = 0;  // code-point offset within the segment
  size_t end = 0;
};

// Splits a segment into tokens and the whitespace runs between them.
// `gaps` has tokens.size() + 1 entries: gaps[i] precedes tokens[i] and the
// last entry trails the final token, so joining gaps and tokens in order
// reproduces the input exactly.
struct Tokenization {
  std::vector<TokenView> tokens;
  std::vector<std::u32string> gaps;

  std::u32string Join() const;
};

Tokenization Tokenize(std::u32string_view text);

// Whitespace-delimited tokens, dropping empty strings.
std::vector<std::u32string> SplitWhitespace(std::u32string_view text);
std::vector<std::string> SplitWhitespace(std::string_view utf8_text);

}  // namespace mtnoise

#endif  // MTNOISE_UTF8_H_
