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

#ifndef MTNOISE_PERTURB_H_
#define MTNOISE_PERTURB_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mtnoise/corpus.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/rng.h"

namespace mtnoise {

// Result of perturbing one token. Fields mirror PerturbationRecord.
struct Perturbation {
  std::u32string token;
  size_t position = 0;
  std::u32string detail;
};

// Forced-position primitives. Preconditions are checked by the random
// variants below; these assume a valid position.
std::u32string ApplySwap(std::u32string_view token, size_t i);  // i, i+1
std::u32string ApplyDupe(std::u32string_view token, size_t i);
std::u32string ApplyDrop(std::u32string_view token, size_t i);

// The units key noise operates on: the token itself for Latin layouts, its
// jamo decomposition for Hangul layouts.
std::u32string KeyUnits(std::u32string_view token, const KeyboardLayout& layout);

// Unit positions whose case-folded symbol has neighbors on `layout`.
std::vector<size_t> KeyEligiblePositions(std::u32string_view units,
                                         const KeyboardLayout& layout);

// Replaces unit `position` with `neighbor` (given in base-layer form),
// re-capitalizing when the original was uppercase, and recomposes Hangul.
// Returns the new token and the inserted symbol.
Perturbation ApplyKey(std::u32string_view token, size_t position,
                      char32_t neighbor, const KeyboardLayout& layout);

// Random variants. std::nullopt signals an ineligible token (the caller
// records a no-op): swap and drop need >= 2 code points, dupe needs >= 1,
// key needs at least one position with neighbors.
std::optional<Perturbation> PerturbSwap(std::u32string_view token,
                                        RandomStream& rng);
std::optional<Perturbation> PerturbDupe(std::u32string_view token,
                                        RandomStream& rng);
std::optional<Perturbation> PerturbDrop(std::u32string_view token,
                                        RandomStream& rng);
std::optional<Perturbation> PerturbKey(std::u32string_view token,
                                       RandomStream& rng,
                                       const KeyboardLayout& layout);

std::optional<Perturbation> Perturb(NoiseType type, std::u32string_view token,
                                    RandomStream& rng,
                                    const KeyboardLayout* layout);

// Re-applies a recorded perturbation to the clean token, verifying that
// the record is consistent with it. No-op records return the token as is.
absl::StatusOr<std::u32string> ReplayRecord(std::u32string_view token,
                                            const PerturbationRecord& record,
                                            const KeyboardLayout* layout);

}  // namespace mtnoise

#endif  // MTNOISE_PERTURB_H_
