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

#ifndef MTNOISE_DATASET_H_
#define MTNOISE_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mtnoise/corpus.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/noise.h"

namespace mtnoise {

// Per-type rates of a mixed noise. Each token gets one categorical draw
// over {swap, dupe, drop, key, clean}, so rates must sum to at most 1.
struct MixSpec {
  std::map<NoiseType, double> rates;
  uint64_t seed = 0;
  const KeyboardLayout* layout = nullptr;

  double Total() const;
};

absl::Status ValidateMixSpec(const MixSpec& mix);

// Parses "swap=0.15,dupe=0.15,..." (types may be omitted).
absl::StatusOr<std::map<NoiseType, double>> ParseMixRates(std::string_view text);

// The categorical selector: a single uniform draw, cumulative rates in
// kAllNoiseTypes order. {t: 1.0} consumes the stream exactly as single-type
// noise at p = 1 does, so the two agree.
TokenSelector MixSelector(const MixSpec& mix);

absl::StatusOr<NoisedCorpus> MixNoise(const std::vector<Segment>& segments,
                                      const MixSpec& mix, std::string base_id,
                                      int jobs = 1);

// Positions of a uniform sample without replacement: the first
// `sample_size` entries of a seeded Fisher-Yates permutation of [0, n).
// Samples of different sizes from one seed are prefixes of each other.
absl::StatusOr<std::vector<size_t>> SubsampleIndices(size_t n,
                                                     size_t sample_size,
                                                     uint64_t seed);

enum class TrainingTask { kTranslation, kCorrection };

std::string_view TrainingTaskName(TrainingTask task);

// Input is always the noised side. Correction outputs are the clean input
// text; translation outputs are the clean target. Segment indices are those
// of the original corpus.
struct TrainingPair {
  Segment input;
  Segment output;
  std::vector<PerturbationRecord> perturbations;
};

struct TrainingSet {
  TrainingTask task = TrainingTask::kCorrection;
  NoiseProvenance noise;
  std::vector<TrainingPair> pairs;

  // Inputs with their records, as a noised corpus.
  NoisedCorpus Provenance() const;
};

absl::StatusOr<TrainingSet> MakeMtTrainingSet(const ParallelCorpus& corpus,
                                              const MixSpec& mix,
                                              size_t sample_size,
                                              std::string base_id,
                                              int jobs = 1);

absl::StatusOr<TrainingSet> MakeCorrectionTrainingSet(
    const std::vector<Segment>& segments, const MixSpec& mix,
    size_t sample_size, std::string base_id, int jobs = 1);

inline constexpr double kValidationRate = 0.2;

// The clean dev set followed by a copy noised with rate 0.2 per type (0.8
// in total). Indices of the second half continue after the first.
struct ValidationSet {
  ParallelCorpus corpus;
  NoisedCorpus noised_half;
};

absl::StatusOr<ValidationSet> MakeValidationSet(const ParallelCorpus& dev,
                                                uint64_t seed,
                                                const KeyboardLayout* layout,
                                                std::string base_id,
                                                int jobs = 1);

// Writes <name>.input.txt, <name>.output.txt, <name>.provenance.jsonl and
// <name>.manifest.json into `dir`. `sources` maps a role ("source",
// "target") to the file the set was built from; their checksums go into the
// manifest.
absl::Status WriteTrainingSet(
    const TrainingSet& set, const std::filesystem::path& dir,
    const std::string& name,
    const std::map<std::string, std::filesystem::path>& sources);

// Replays every pair's records on its clean side and compares with the
// input. Only meaningful for correction sets.
absl::Status VerifyTrainingSet(const TrainingSet& set,
                               const KeyboardLayout* layout);

}  // namespace mtnoise

#endif  // MTNOISE_DATASET_H_
