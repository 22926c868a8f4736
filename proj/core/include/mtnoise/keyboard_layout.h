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

#ifndef MTNOISE_KEYBOARD_LAYOUT_H_
#define MTNOISE_KEYBOARD_LAYOUT_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mtnoise {

// A physical keyboard description used for key noise.
//
// Layout files are UTF-8 text with `#` comments and three sections:
//
//   name <id>
//   version <int>
//   script latin|hangul
//   [rows]
//   <stagger> <key> <key> ...      one line per physical row, top first;
//                                  stagger is the row offset in key widths
//   [shift]                        optional
//   <shifted> <base>               symbol typed with shift on the base key
//   [adjacency]                    optional; derived from [rows] if absent
//   <key>: <neighbor> <neighbor> ...
//
// Derived adjacency: the keys directly left and right on the same row plus
// the two keys with the nearest horizontal centre on each adjacent row
// (ties go to the left key), closed under symmetry.
class KeyboardLayout {
 public:
  enum class Script { kLatin, kHangul };

  struct Key {
    char32_t symbol;
    int row;
    int column;
    double x;  // horizontal centre in key widths
  };

  static absl::StatusOr<KeyboardLayout> Parse(std::string_view contents);
  static absl::StatusOr<KeyboardLayout> Load(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  int version() const { return version_; }
  Script script() const { return script_; }
  // SHA-256 of the file contents the layout was parsed from.
  const std::string& sha256() const { return sha256_; }

  const std::vector<Key>& keys() const { return keys_; }
  const std::map<char32_t, std::vector<char32_t>>& adjacency() const {
    return adjacency_;
  }

  // Neighbors of the key that produces `symbol`, resolving shifted
  // symbols to their base key. Returns nullptr for unmapped symbols. The
  // caller is responsible for case folding.
  const std::vector<char32_t>* Neighbors(char32_t symbol) const;

  // Adjacency computed from the row geometry alone.
  std::map<char32_t, std::vector<char32_t>> DeriveAdjacency() const;

  // Renders the layout back to file syntax with an explicit adjacency
  // section.
  std::string Format() const;

 private:
  std::string name_;
  int version_ = 0;
  Script script_ = Script::kLatin;
  std::string sha256_;
  std::vector<std::pair<double, std::vector<char32_t>>> rows_;
  std::vector<Key> keys_;
  std::map<char32_t, char32_t> shift_;
  std::map<char32_t, std::vector<char32_t>> adjacency_;
};

// Layouts shipped with the library: qwerty, qwertz, azerty, dubeolsik.
std::vector<std::string> BuiltinLayoutNames();
absl::StatusOr<const KeyboardLayout*> BuiltinLayout(std::string_view name);
// Raw file text of a shipped layout.
absl::StatusOr<std::string_view> BuiltinLayoutSource(std::string_view name);

// Resolves `name_or_path` as a built-in name first, then as a file path.
// Loaded layouts are cached for the lifetime of the process.
absl::StatusOr<const KeyboardLayout*> ResolveLayout(std::string_view name_or_path);

// Simple case mapping for Basic Latin and Latin-1 letters.
char32_t FoldCase(char32_t cp);
char32_t ToUpper(char32_t cp);
bool IsUpper(char32_t cp);

}  // namespace mtnoise

#endif  // MTNOISE_KEYBOARD_LAYOUT_H_
