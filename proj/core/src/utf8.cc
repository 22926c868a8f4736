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

#include "mtnoise/utf8.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace mtnoise {
namespace {

// Decodes one scalar starting at bytes[i]; returns the sequence length or 0
// if the sequence is invalid.
size_t DecodeOne(std::string_view bytes, size_t i, char32_t* cp) {
  const auto b0 = static_cast<unsigned char>(bytes[i]);
  if (b0 < 0x80) {
    *cp = b0;
    return 1;
  }
  size_t len;
  char32_t value;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    value = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    value = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    value = b0 & 0x07;
    min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > bytes.size()) return 0;
  for (size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(bytes[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    value = (value << 6) | (b & 0x3F);
  }
  if (value < min || value > 0x10FFFF) return 0;
  if (value >= 0xD800 && value <= 0xDFFF) return 0;
  *cp = value;
  return len;
}

}  // namespace

size_t FindInvalidUtf8(std::string_view bytes) {
  size_t i = 0;
  char32_t cp;
  while (i < bytes.size()) {
    const size_t n = DecodeOne(bytes, i, &cp);
    if (n == 0) return i;
    i += n;
  }
  return std::string_view::npos;
}

absl::StatusOr<std::u32string> DecodeUtf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    char32_t cp;
    const size_t n = DecodeOne(bytes, i, &cp);
    if (n == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid UTF-8 at byte offset ", i));
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) AppendUtf8(cp, &out);
  return out;
}

bool IsWhitespace(char32_t cp) {
  if (cp <= 0x20) {
    return cp == 0x20 || (cp >= 0x09 && cp <= 0x0D) ||
           (cp >= 0x1C && cp <= 0x1F);
  }
  if (cp < 0x85) return false;
  switch (cp) {
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::u32string Tokenization::Join() const {
  std::u32string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    out += gaps[i];
    out += tokens[i].token;
  }
  out += gaps.back();
  return out;
}

Tokenization Tokenize(std::u32string_view text) {
  Tokenization result;
  size_t i = 0;
  std::u32string gap;
  while (i < text.size()) {
    if (IsWhitespace(text[i])) {
      gap.push_back(text[i++]);
      continue;
    }
    const size_t begin = i;
    while (i < text.size() && !IsWhitespace(text[i])) ++i;
    result.gaps.push_back(std::move(gap));
    gap.clear();
    result.tokens.push_back(
        TokenView{std::u32string(text.substr(begin, i - begin)), begin, i});
  }
  result.gaps.push_back(std::move(gap));
  return result;
}

std::vector<std::u32string> SplitWhitespace(std::u32string_view text) {
  std::vector<std::u32string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsWhitespace(text[i])) ++i;
    const size_t begin = i;
    while (i < text.size() && !IsWhitespace(text[i])) ++i;
    if (i > begin) out.emplace_back(text.substr(begin, i - begin));
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view utf8_text) {
  // Lenient decode: callers hand in text that already passed validation.
  std::u32string decoded;
  size_t i = 0;
  while (i < utf8_text.size()) {
    char32_t cp;
    const size_t n = DecodeOne(utf8_text, i, &cp);
    if (n == 0) {
      decoded.push_back(0xFFFD);
      ++i;
    } else {
      decoded.push_back(cp);
      i += n;
    }
  }
  std::vector<std::string> out;
  for (const auto& t : SplitWhitespace(decoded)) out.push_back(EncodeUtf8(t));
  return out;
}

}  // namespace mtnoise
