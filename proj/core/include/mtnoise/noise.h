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

#ifndef MTNOISE_NOISE_H_
#define MTNOISE_NOISE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mtnoise/corpus.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/rng.h"

namespace mtnoise {

// Single-type noise at level p. Key noise requires a layout.
struct NoiseSpec {
  NoiseType type = NoiseType::kSwap;
  double p = 0.0;
  uint64_t seed = 0;
  const KeyboardLayout* layout = nullptr;
};

absl::Status ValidateNoiseSpec(const NoiseSpec& spec);

// Decides, from a token's random stream, which noise (if any) to apply.
// It must consume draws from the stream before the perturbation itself
// does, so that the perturbation sees a deterministic continuation.
using TokenSelector = std::function<std::optional<NoiseType>(RandomStream&)>;

struct NoisedText {
  std::string text;
  std::vector<PerturbationRecord> records;
};

// Core token loop shared by single-type and mixed noise. Every token gets
// its own stream DeriveTokenStream(seed, segment_index, token_index);
// whitespace runs are copied verbatim.
absl::StatusOr<NoisedText> NoiseText(std::string_view text,
                                     int64_t segment_index, uint64_t seed,
                                     const TokenSelector& select,
                                     const KeyboardLayout* layout);

// Each token is selected with probability p and perturbed at most once.
absl::StatusOr<NoisedText> NoiseSegment(const Segment& segment,
                                        const NoiseSpec& spec);

// Applies NoiseSegment to every segment on up to `jobs` threads. The output
// is identical for any `jobs`.
absl::StatusOr<NoisedCorpus> NoiseCorpus(const std::vector<Segment>& segments,
                                         const NoiseSpec& spec,
                                         std::string base_id, int jobs = 1);

NoiseProvenance MakeProvenance(const NoiseSpec& spec, std::string base_id);

inline constexpr int kLadderLevels = 10;

// p for ladder level k in 1..10.
inline double LadderLevelP(int level) { return level / 10.0; }

// Seed of ladder level k; a pure function of (seed, k).
inline uint64_t LadderLevelSeed(uint64_t seed, int level) {
  return DeriveSeed(seed, static_cast<uint64_t>(level));
}

// Ten noised corpora at p = 0.1 .. 1.0.
absl::StatusOr<std::vector<NoisedCorpus>> MakeNoiseLadder(
    const std::vector<Segment>& segments, NoiseType type,
    const KeyboardLayout* layout, uint64_t seed, const std::string& base_id,
    int jobs = 1);

// Re-applies the records of one segment to its clean text.
absl::StatusOr<std::string> ReplaySegment(
    std::string_view base_text, const std::vector<PerturbationRecord>& records,
    const KeyboardLayout* layout);

// Checks that replaying every segment's records on `base` reproduces the
// noised text, and that no token carries more than one record.
absl::Status VerifyReplay(const std::vector<Segment>& base,
                          const NoisedCorpus& noised);

struct NoiseStats {
  int64_t tokens = 0;
  int64_t attempted = 0;  // tokens selected for noise, eligible or not
  int64_t applied = 0;    // tokens whose text actually changed
  std::map<std::string, int64_t> attempted_by_type;

  double AttemptedRate() const {
    return tokens ? static_cast<double>(attempted) / tokens : 0.0;
  }
  double AppliedRate() const {
    return tokens ? static_cast<double>(applied) / tokens : 0.0;
  }
};

NoiseStats ComputeNoiseStats(const std::vector<Segment>& base,
                             const NoisedCorpus& noised);

}  // namespace mtnoise

#endif  // MTNOISE_NOISE_H_
