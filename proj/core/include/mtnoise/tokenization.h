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

#ifndef MTNOISE_TOKENIZATION_H_
#define MTNOISE_TOKENIZATION_H_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "mtnoise/corpus.h"

namespace mtnoise {

// Bag-of-tokens F1: clipped multiset overlap gives precision over `a` and
// recall over `b`. Two empty sequences score 1.
double TokenF1(const std::vector<std::string>& a,
               const std::vector<std::string>& b);

// Maps a segment to its subword pieces.
using PieceFunction = std::function<std::vector<std::string>(std::string_view)>;

std::vector<std::string> WhitespacePieces(std::string_view segment);
std::vector<std::string> CharPieces(std::string_view segment);

// Byte-pair-encoding merges applied independently inside each whitespace
// word, starting from code points. Merge files hold one `left right` pair
// per line; earlier lines have higher priority. '#' lines are ignored.
class BpeModel {
 public:
  static absl::StatusOr<BpeModel> Parse(std::string_view contents);
  static absl::StatusOr<BpeModel> Load(const std::filesystem::path& path);

  // Repeatedly merges every occurrence of the highest-priority adjacent
  // pair until no listed pair remains.
  std::vector<std::string> EncodeWord(std::string_view word) const;
  std::vector<std::string> Encode(std::string_view segment) const;

  size_t size() const { return ranks_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, size_t> ranks_;
};

// Sum of pieces over sum of whitespace words. Errors when the corpus has
// no words.
absl::StatusOr<double> Fertility(const std::vector<Segment>& segments,
                                 const PieceFunction& pieces);

// Fertility when an external tool already produced the pieces: line i of
// `pieces` is segment i split on spaces.
absl::StatusOr<double> FertilityFromPieces(const std::vector<Segment>& segments,
                                           const std::vector<Segment>& pieces);

}  // namespace mtnoise

#endif  // MTNOISE_TOKENIZATION_H_
