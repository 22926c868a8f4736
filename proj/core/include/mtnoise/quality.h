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

#ifndef MTNOISE_QUALITY_H_
#define MTNOISE_QUALITY_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mtnoise/bleu.h"
#include "mtnoise/chrf.h"
#include "mtnoise/corpus.h"

namespace mtnoise {

// Aligns two score files by segment index. Both must cover exactly the
// same indices; the result is ordered by ascending index.
struct AlignedScores {
  std::vector<int64_t> indices;
  std::vector<double> a;
  std::vector<double> b;
};

absl::StatusOr<AlignedScores> AlignScores(const ScoreFile& a, const ScoreFile& b);

// Mean over segments of QE(x_c, y_c) - QE(x_c, y_n). Both files must have
// been scored against the clean source.
absl::StatusOr<double> DeltaQe(const ScoreFile& qe_clean,
                               const ScoreFile& qe_noisy);

enum class FauxBase { kBleu, kChrf };

// Similarity of outputs for the noisy source to outputs for the clean
// source, with the latter as pseudo-reference.
absl::StatusOr<double> FauxMetric(const std::vector<std::string>& hyp_noisy,
                                  const std::vector<std::string>& hyp_clean,
                                  FauxBase base, const BleuParams& bleu = {},
                                  const ChrfParams& chrf = {});

// Faux-COMET style: the mean of an external score file produced with the
// clean-source hypotheses in the reference slot.
absl::StatusOr<double> FauxFromScores(const ScoreFile& scores);

}  // namespace mtnoise

#endif  // MTNOISE_QUALITY_H_
