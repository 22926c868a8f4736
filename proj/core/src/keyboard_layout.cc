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
#include <charconv>
#include <cmath>
#include <memory>
#include <mutex>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/file_util.h"
#include "mtnoise/status_macros.h"
#include "mtnoise/utf8.h"

namespace mtnoise {

// Defined in the generated embedded_layouts.cc.
std::vector<std::pair<std::string_view, std::string_view>> EmbeddedLayouts();

namespace {

absl::Status LayoutError(size_t line_no, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("layout line ", line_no, ": ", std::string(what)));
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Each whitespace-separated field must be a single code point.
absl::StatusOr<std::vector<char32_t>> ParseSymbols(std::string_view text,
                                                   size_t line_no) {
  ASSIGN_OR_RETURN(std::u32string decoded, DecodeUtf8(text));
  std::vector<char32_t> out;
  for (const auto& field : SplitWhitespace(decoded)) {
    if (field.size() != 1) {
      return LayoutError(line_no, absl::StrCat("key '", EncodeUtf8(field),
                                               "' is not a single code point"));
    }
    out.push_back(field[0]);
  }
  return out;
}

}  // namespace

absl::StatusOr<KeyboardLayout> KeyboardLayout::Parse(std::string_view contents) {
  RETURN_IF_ERROR(
      DecodeUtf8(contents).status());  // reject invalid bytes up front
  KeyboardLayout layout;
  layout.sha256_ = Sha256Hex(contents);

  enum class Section { kHeader, kRows, kShift, kAdjacency } section =
      Section::kHeader;
  bool explicit_adjacency = false;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= contents.size()) {
    size_t nl = contents.find('\n', start);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = Trim(contents.substr(start, nl - start));
    start = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    if (line == "[rows]") {
      section = Section::kRows;
      continue;
    }
    if (line == "[shift]") {
      section = Section::kShift;
      continue;
    }
    if (line == "[adjacency]") {
      section = Section::kAdjacency;
      explicit_adjacency = true;
      continue;
    }

    switch (section) {
      case Section::kHeader: {
        const size_t sp = line.find(' ');
        if (sp == std::string_view::npos) {
          return LayoutError(line_no, "expected '<key> <value>'");
        }
        std::string_view key = line.substr(0, sp);
        std::string_view value = Trim(line.substr(sp + 1));
        if (key == "name") {
          layout.name_ = std::string(value);
        } else if (key == "version") {
          auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                         layout.version_);
          if (ec != std::errc() || p != value.data() + value.size()) {
            return LayoutError(line_no, "bad version");
          }
        } else if (key == "script") {
          if (value == "latin") {
            layout.script_ = Script::kLatin;
          } else if (value == "hangul") {
            layout.script_ = Script::kHangul;
          } else {
            return LayoutError(line_no, "script must be latin or hangul");
          }
        } else {
          return LayoutError(line_no, absl::StrCat("unknown header key '",
                                                   std::string(key), "'"));
        }
        break;
      }
      case Section::kRows: {
        const size_t sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos) {
          return LayoutError(line_no, "row needs a stagger and keys");
        }
        std::string_view offset_text = line.substr(0, sp);
        double offset = 0.0;
        auto [p, ec] = std::from_chars(offset_text.data(),
                                       offset_text.data() + offset_text.size(),
                                       offset);
        if (ec != std::errc() || p != offset_text.data() + offset_text.size()) {
          return LayoutError(line_no, "bad row stagger");
        }
        ASSIGN_OR_RETURN(auto keys, ParseSymbols(line.substr(sp + 1), line_no));
        if (keys.empty()) return LayoutError(line_no, "empty row");
        layout.rows_.emplace_back(offset, std::move(keys));
        break;
      }
      case Section::kShift: {
        ASSIGN_OR_RETURN(auto pair, ParseSymbols(line, line_no));
        if (pair.size() != 2) {
          return LayoutError(line_no, "shift line needs '<shifted> <base>'");
        }
        layout.shift_[pair[0]] = pair[1];
        break;
      }
      case Section::kAdjacency: {
        const size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
          return LayoutError(line_no, "expected '<key>: <neighbors>'");
        }
        ASSIGN_OR_RETURN(auto key, ParseSymbols(line.substr(0, colon), line_no));
        ASSIGN_OR_RETURN(auto neighbors,
                         ParseSymbols(line.substr(colon + 1), line_no));
        if (key.size() != 1) return LayoutError(line_no, "one key per line");
        if (neighbors.empty()) return LayoutError(line_no, "empty neighbor list");
        if (!layout.adjacency_.emplace(key[0], std::move(neighbors)).second) {
          return LayoutError(line_no, "duplicate adjacency entry");
        }
        break;
      }
    }
  }

  if (layout.name_.empty()) {
    return absl::InvalidArgumentError("layout has no name");
  }
  if (layout.rows_.empty()) {
    return absl::InvalidArgumentError("layout has no [rows] section");
  }

  std::set<char32_t> seen;
  for (size_t r = 0; r < layout.rows_.size(); ++r) {
    const auto& [offset, symbols] = layout.rows_[r];
    for (size_t c = 0; c < symbols.size(); ++c) {
      if (!seen.insert(symbols[c]).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("key '", EncodeUtf8(std::u32string(1, symbols[c])),
                         "' appears twice"));
      }
      layout.keys_.push_back(Key{symbols[c], static_cast<int>(r),
                                 static_cast<int>(c),
                                 offset + static_cast<double>(c)});
    }
  }
  for (const auto& [shifted, base] : layout.shift_) {
    if (!seen.count(base)) {
      return absl::InvalidArgumentError("shift entry refers to an unknown key");
    }
  }

  if (!explicit_adjacency) layout.adjacency_ = layout.DeriveAdjacency();

  // Every key needs neighbors, and the relation must be symmetric.
  for (const auto& key : layout.keys_) {
    auto it = layout.adjacency_.find(key.symbol);
    if (it == layout.adjacency_.end() || it->second.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("key '", EncodeUtf8(std::u32string(1, key.symbol)),
                       "' has no neighbors"));
    }
  }
  for (const auto& [key, neighbors] : layout.adjacency_) {
    if (!seen.count(key)) {
      return absl::InvalidArgumentError("adjacency entry for an unknown key");
    }
    for (char32_t n : neighbors) {
      auto back = layout.adjacency_.find(n);
      if (back == layout.adjacency_.end() ||
          std::find(back->second.begin(), back->second.end(), key) ==
              back->second.end()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "adjacency is not symmetric between '",
            EncodeUtf8(std::u32string(1, key)), "' and '",
            EncodeUtf8(std::u32string(1, n)), "'"));
      }
    }
  }
  return layout;
}

absl::StatusOr<KeyboardLayout> KeyboardLayout::Load(
    const std::filesystem::path& path) {
  ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  auto layout = Parse(contents);
  if (!layout.ok()) {
    return absl::Status(layout.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     layout.status().message()));
  }
  return layout;
}

const std::vector<char32_t>* KeyboardLayout::Neighbors(char32_t symbol) const {
  if (auto s = shift_.find(symbol); s != shift_.end()) symbol = s->second;
  auto it = adjacency_.find(symbol);
  return it == adjacency_.end() ? nullptr : &it->second;
}

std::map<char32_t, std::vector<char32_t>> KeyboardLayout::DeriveAdjacency()
    const {
  std::map<char32_t, std::set<std::pair<int, int>>> positions;
  auto add = [&](const Key& a, const Key& b) {
    positions[a.symbol].insert({b.row, b.column});
    positions[b.symbol].insert({a.row, a.column});
  };
  std::vector<std::vector<const Key*>> by_row(rows_.size());
  for (const auto& key : keys_) by_row[key.row].push_back(&key);

  for (const auto& key : keys_) {
    const auto& row = by_row[key.row];
    if (key.column > 0) add(key, *row[key.column - 1]);
    if (key.column + 1 < static_cast<int>(row.size())) {
      add(key, *row[key.column + 1]);
    }
    for (int dr : {-1, 1}) {
      const int r = key.row + dr;
      if (r < 0 || r >= static_cast<int>(by_row.size())) continue;
      std::vector<const Key*> candidates = by_row[r];
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](const Key* a, const Key* b) {
                         return std::abs(a->x - key.x) < std::abs(b->x - key.x);
                       });
      for (size_t i = 0; i < candidates.size() && i < 2; ++i) {
        add(key, *candidates[i]);
      }
    }
  }

  std::map<char32_t, std::vector<char32_t>> out;
  for (const auto& key : keys_) {
    std::vector<char32_t>& list = out[key.symbol];
    for (const auto& [r, c] : positions[key.symbol]) {
      list.push_back(by_row[r][c]->symbol);
    }
  }
  return out;
}

std::string KeyboardLayout::Format() const {
  std::string out;
  absl::StrAppend(&out, "name ", name_, "\n");
  absl::StrAppend(&out, "version ", version_, "\n");
  absl::StrAppend(&out, "script ",
                  script_ == Script::kHangul ? "hangul" : "latin", "\n");
  out += "\n[rows]\n";
  for (const auto& [offset, symbols] : rows_) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), offset,
                                 std::chars_format::fixed, 2);
    out.append(buf, p);
    for (char32_t s : symbols) {
      out.push_back(' ');
      AppendUtf8(s, &out);
    }
    out.push_back('\n');
  }
  if (!shift_.empty()) {
    out += "\n[shift]\n";
    for (const auto& [shifted, base] : shift_) {
      AppendUtf8(shifted, &out);
      out.push_back(' ');
      AppendUtf8(base, &out);
      out.push_back('\n');
    }
  }
  out += "\n[adjacency]\n";
  // Row-major key order keeps the section readable.
  for (const auto& key : keys_) {
    AppendUtf8(key.symbol, &out);
    out.push_back(':');
    for (char32_t n : adjacency_.at(key.symbol)) {
      out.push_back(' ');
      AppendUtf8(n, &out);
    }
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> BuiltinLayoutNames() {
  std::vector<std::string> names;
  for (const auto& [name, source] : EmbeddedLayouts()) names.emplace_back(name);
  return names;
}

absl::StatusOr<std::string_view> BuiltinLayoutSource(std::string_view name) {
  for (const auto& [n, source] : EmbeddedLayouts()) {
    if (n == name) return source;
  }
  return absl::NotFoundError(
      absl::StrCat("no built-in layout named '", std::string(name), "'"));
}

namespace {

std::mutex& CacheMutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, std::unique_ptr<KeyboardLayout>, std::less<>>& Cache() {
  static auto* cache =
      new std::map<std::string, std::unique_ptr<KeyboardLayout>, std::less<>>();
  return *cache;
}

}  // namespace

absl::StatusOr<const KeyboardLayout*> BuiltinLayout(std::string_view name) {
  ASSIGN_OR_RETURN(std::string_view source, BuiltinLayoutSource(name));
  std::lock_guard<std::mutex> lock(CacheMutex());
  const std::string key = absl::StrCat("builtin:", std::string(name));
  auto& cache = Cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second.get();
  ASSIGN_OR_RETURN(KeyboardLayout layout, KeyboardLayout::Parse(source));
  auto owned = std::make_unique<KeyboardLayout>(std::move(layout));
  const KeyboardLayout* ptr = owned.get();
  cache.emplace(key, std::move(owned));
  return ptr;
}

absl::StatusOr<const KeyboardLayout*> ResolveLayout(
    std::string_view name_or_path) {
  if (BuiltinLayoutSource(name_or_path).ok()) return BuiltinLayout(name_or_path);
  std::lock_guard<std::mutex> lock(CacheMutex());
  const std::string key = absl::StrCat("file:", std::string(name_or_path));
  auto& cache = Cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second.get();
  ASSIGN_OR_RETURN(KeyboardLayout layout,
                   KeyboardLayout::Load(std::string(name_or_path)));
  auto owned = std::make_unique<KeyboardLayout>(std::move(layout));
  const KeyboardLayout* ptr = owned.get();
  cache.emplace(key, std::move(owned));
  return ptr;
}

// ---------------------------------------------------------------------------

char32_t FoldCase(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

char32_t ToUpper(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 0x20;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
  return cp;
}

bool IsUpper(char32_t cp) { return FoldCase(cp) != cp; }

}  // namespace mtnoise
