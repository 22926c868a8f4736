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

#include "mtnoise/tokenization.h"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/bleu.h"
#include "mtnoise/file_util.h"
#include "mtnoise/status_macros.h"
#include "mtnoise/utf8.h"

namespace mtnoise {

double TokenF1(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::unordered_map<std::string_view, int> counts;
  for (const auto& t : b) ++counts[t];
  double overlap = 0;
  for (const auto& t : a) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision = overlap / static_cast<double>(a.size());
  const double recall = overlap / static_cast<double>(b.size());
  return 2 * precision * recall / (precision + recall);
}

std::vector<std::string> WhitespacePieces(std::string_view segment) {
  return SplitWhitespace(segment);
}

std::vector<std::string> CharPieces(std::string_view segment) {
  return BleuTokenize(segment, BleuTokenizer::kChar);
}

absl::StatusOr<BpeModel> BpeModel::Parse(std::string_view contents) {
  ASSIGN_OR_RETURN(std::u32string decoded, DecodeUtf8(contents));
  BpeModel model;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= contents.size()) {
    size_t nl = contents.find('\n', start);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto parts = SplitWhitespace(line);
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("merges line ", line_no, ": expected 'left right'"));
    }
    model.ranks_.emplace(std::make_pair(parts[0], parts[1]), model.ranks_.size());
  }
  return model;
}

absl::StatusOr<BpeModel> BpeModel::Load(const std::filesystem::path& path) {
  ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  return Parse(contents);
}

std::vector<std::string> BpeModel::EncodeWord(std::string_view word) const {
  std::vector<std::string> pieces = CharPieces(word);
  while (pieces.size() > 1) {
    size_t best_rank = std::numeric_limits<size_t>::max();
    std::pair<std::string, std::string> best;
    for (size_t i = 0; i + 1 < pieces.size(); ++i) {
      auto it = ranks_.find({pieces[i], pieces[i + 1]});
      if (it != ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = it->first;
      }
    }
    if (best_rank == std::numeric_limits<size_t>::max()) break;
    std::vector<std::string> merged;
    merged.reserve(pieces.size());
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (i + 1 < pieces.size() && pieces[i] == best.first &&
          pieces[i + 1] == best.second) {
        merged.push_back(pieces[i] + pieces[i + 1]);
        ++i;
      } else {
        merged.push_back(std::move(pieces[i]));
      }
    }
    pieces = std::move(merged);
  }
  return pieces;
}

std::vector<std::string> BpeModel::Encode(std::string_view segment) const {
  std::vector<std::string> out;
  for (const auto& word : SplitWhitespace(segment)) {
    for (auto& piece : EncodeWord(word)) out.push_back(std::move(piece));
  }
  return out;
}

absl::StatusOr<double> Fertility(const std::vector<Segment>& segments,
                                 const PieceFunction& pieces) {
  double words = 0;
  double total = 0;
  for (const auto& seg : segments) {
    words += static_cast<double>(SplitWhitespace(seg.text).size());
    total += static_cast<double>(pieces(seg.text).size());
  }
  if (words == 0) {
    return absl::InvalidArgumentError("fertility: corpus has no words");
  }
  return total / words;
}

absl::StatusOr<double> FertilityFromPieces(const std::vector<Segment>& segments,
                                           const std::vector<Segment>& pieces) {
  if (segments.size() != pieces.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fertility: ", segments.size(), " segments but ", pieces.size(),
        " tokenized lines"));
  }
  double words = 0;
  double total = 0;
  for (size_t i = 0; i < segments.size(); ++i) {
    words += static_cast<double>(SplitWhitespace(segments[i].text).size());
    total += static_cast<double>(
        BleuTokenize(pieces[i].text, BleuTokenizer::kPretokenized).size());
  }
  if (words == 0) {
    return absl::InvalidArgumentError("fertility: corpus has no words");
  }
  return total / words;
}

}  // namespace mtnoise
