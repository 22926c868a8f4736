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

#ifndef MTNOISE_CHRF_H_
#define MTNOISE_CHRF_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mtnoise {

// Defaults reproduce the chrF2 signature
//   nrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no
// With effective_order the F-score is computed from precision and recall
// averaged over the n-gram orders present in both hypothesis and
// reference; otherwise every order contributes, with a 1e-16 floor.
struct ChrfParams {
  int char_order = 6;
  int word_order = 0;
  double beta = 2.0;
  bool whitespace = false;
  bool effective_order = true;
};

absl::Status ValidateChrfParams(const ChrfParams& params);

// Sufficient statistics: for each order (character orders first, then word
// orders) the hypothesis n-gram count, reference n-gram count and clipped
// matches. Corpus scores sum these before computing F-beta.
struct ChrfStats {
  std::vector<double> values;  // 3 * (char_order + word_order)

  void Add(const ChrfStats& other);
};

ChrfStats ChrfSentenceStats(std::string_view hypothesis,
                            std::string_view reference,
                            const ChrfParams& params);

// Score in [0, 100]. All-zero statistics (both sides empty) score 100.
double ChrfFromStats(const ChrfStats& stats, const ChrfParams& params);

double SentenceChrf(std::string_view hypothesis, std::string_view reference,
                    const ChrfParams& params = {});

// Corpus-level chrF. Requires equal lengths.
absl::StatusOr<double> CorpusChrf(const std::vector<std::string>& hypotheses,
                                  const std::vector<std::string>& references,
                                  const ChrfParams& params = {}, int jobs = 1);

}  // namespace mtnoise

#endif  // MTNOISE_CHRF_H_
