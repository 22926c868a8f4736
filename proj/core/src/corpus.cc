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

#include "mtnoise/corpus.h"

#include <cmath>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace mtnoise {

absl::Status ValidateSegments(const std::vector<Segment>& segments) {
  for (size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].index != static_cast<int64_t>(i)) {
      return absl::InvalidArgumentError(
          absl::StrCat("segment indices must be contiguous from 0; position ",
                       i, " has index ", segments[i].index));
    }
    if (segments[i].text.find('\n') != std::string::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("segment ", i, " contains a newline"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateCorpus(const ParallelCorpus& corpus) {
  if (auto s = ValidateSegments(corpus.source); !s.ok()) return s;
  if (corpus.target) {
    if (corpus.target->size() != corpus.source.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "source has ", corpus.source.size(), " segments but target has ",
          corpus.target->size()));
    }
    return ValidateSegments(*corpus.target);
  }
  return absl::OkStatus();
}

std::vector<Segment> MakeSegments(const std::vector<std::string>& lines) {
  std::vector<Segment> out;
  out.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    out.push_back(Segment{static_cast<int64_t>(i), lines[i]});
  }
  return out;
}

std::vector<std::string> Texts(const std::vector<Segment>& segments) {
  std::vector<std::string> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.text);
  return out;
}

std::string_view NoiseTypeName(NoiseType type) {
  switch (type) {
    case NoiseType::kSwap:
      return "swap";
    case NoiseType::kDupe:
      return "dupe";
    case NoiseType::kDrop:
      return "drop";
    case NoiseType::kKey:
      return "key";
  }
  return "unknown";
}

absl::StatusOr<NoiseType> ParseNoiseType(std::string_view name) {
  for (NoiseType t : kAllNoiseTypes) {
    if (NoiseTypeName(t) == name) return t;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown noise type '", std::string(name),
                   "' (expected swap, dupe, drop or key)"));
}

std::vector<Segment> NoisedCorpus::AsSegments() const {
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(Segment{s.index, s.text});
  return out;
}

std::vector<double> ScoreFile::Values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& [index, score] : rows) out.push_back(score);
  return out;
}

double ScoreFile::Mean() const {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [index, score] : rows) sum += score;
  return sum / static_cast<double>(rows.size());
}

absl::Status ValidateScoreFile(const ScoreFile& file) {
  std::set<int64_t> seen;
  for (const auto& [index, score] : file.rows) {
    if (!seen.insert(index).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate score for segment ", index));
    }
    if (!std::isfinite(score)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite score for segment ", index));
    }
  }
  return absl::OkStatus();
}

}  // namespace mtnoise
