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

#ifndef MTNOISE_CORPUS_H_
#define MTNOISE_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mtnoise {

// One logical sentence. `index` is the alignment key used everywhere
// (score files, runs, pipelines); text never contains '\n'.
struct Segment {
  int64_t index = 0;
  std::string text;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct LanguagePair {
  std::string source;  // BCP-47
  std::string target;

  friend bool operator==(const LanguagePair&, const LanguagePair&) = default;
};

struct ParallelCorpus {
  std::vector<Segment> source;
  std::optional<std::vector<Segment>> target;
  LanguagePair languages;
};

// Checks contiguous 0-based indices, newline-free text and, when a target
// side is present, equal side lengths.
absl::Status ValidateCorpus(const ParallelCorpus& corpus);
absl::Status ValidateSegments(const std::vector<Segment>& segments);

std::vector<Segment> MakeSegments(const std::vector<std::string>& lines);
std::vector<std::string> Texts(const std::vector<Segment>& segments);

enum class NoiseType { kSwap, kDupe, kDrop, kKey };

inline constexpr NoiseType kAllNoiseTypes[] = {NoiseType::kSwap, NoiseType::kDupe,
                                               NoiseType::kDrop, NoiseType::kKey};

std::string_view NoiseTypeName(NoiseType type);
absl::StatusOr<NoiseType> ParseNoiseType(std::string_view name);

// What a single token perturbation did. `char_position` is a code-point
// offset inside the token, or a jamo offset when the token was decomposed
// for Dubeolsik key noise. `detail` (UTF-8) holds:
//   swap: the two code points at [pos, pos+1] before the swap
//   dupe: the duplicated code point
//   drop: the removed code point
//   key:  the replacement code point
// A token that was sampled but had no eligible position is recorded with
// applied == false, char_position == 0 and empty detail.
struct PerturbationRecord {
  int32_t token_index = 0;
  NoiseType type = NoiseType::kSwap;
  int32_t char_position = 0;
  std::string detail;
  bool applied = true;

  friend bool operator==(const PerturbationRecord&,
                         const PerturbationRecord&) = default;
};

// How a noised corpus was produced. kind is a noise type name, or "mix" for
// categorical mixtures (then `rates` is populated and `p` is their sum).
struct NoiseProvenance {
  std::string base;  // identifier of the clean corpus
  std::string kind;
  double p = 0.0;
  std::map<std::string, double> rates;
  uint64_t seed = 0;
  std::optional<std::string> layout;
  std::optional<std::string> layout_sha256;

  friend bool operator==(const NoiseProvenance&,
                         const NoiseProvenance&) = default;
};

struct NoisedSegment {
  int64_t index = 0;
  std::string text;
  std::vector<PerturbationRecord> perturbations;

  friend bool operator==(const NoisedSegment&, const NoisedSegment&) = default;
};

struct NoisedCorpus {
  NoiseProvenance noise;
  std::vector<NoisedSegment> segments;

  friend bool operator==(const NoisedCorpus&, const NoisedCorpus&) = default;

  std::vector<Segment> AsSegments() const;
};

// Per-segment scores of one system under one metric.
struct ScoreFile {
  std::string system;
  std::string metric;
  std::optional<double> corpus_score;  // set when the metric is not a mean
  std::vector<std::pair<int64_t, double>> rows;

  friend bool operator==(const ScoreFile&, const ScoreFile&) = default;

  std::vector<double> Values() const;
  double Mean() const;  // fixed-order summation; 0 for empty files
};

absl::Status ValidateScoreFile(const ScoreFile& file);

}  // namespace mtnoise

#endif  // MTNOISE_CORPUS_H_
