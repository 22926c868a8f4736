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

#include "mtnoise/quality.h"

#include <algorithm>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/status_macros.h"

namespace mtnoise {

absl::StatusOr<AlignedScores> AlignScores(const ScoreFile& a,
                                          const ScoreFile& b) {
  RETURN_IF_ERROR(ValidateScoreFile(a));
  RETURN_IF_ERROR(ValidateScoreFile(b));
  std::map<int64_t, double> by_index_a(a.rows.begin(), a.rows.end());
  std::map<int64_t, double> by_index_b(b.rows.begin(), b.rows.end());
  if (by_index_a.size() != by_index_b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "score files cover ", by_index_a.size(), " and ", by_index_b.size(),
        " segments"));
  }
  AlignedScores out;
  for (const auto& [index, score] : by_index_a) {
    auto it = by_index_b.find(index);
    if (it == by_index_b.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("segment ", index, " missing from second score file"));
    }
    out.indices.push_back(index);
    out.a.push_back(score);
    out.b.push_back(it->second);
  }
  return out;
}

absl::StatusOr<double> DeltaQe(const ScoreFile& qe_clean,
                               const ScoreFile& qe_noisy) {
  ASSIGN_OR_RETURN(AlignedScores aligned, AlignScores(qe_clean, qe_noisy));
  if (aligned.indices.empty()) {
    return absl::InvalidArgumentError("delta-QE of empty score files");
  }
  double sum = 0.0;
  for (size_t i = 0; i < aligned.indices.size(); ++i) {
    sum += aligned.a[i] - aligned.b[i];
  }
  return sum / static_cast<double>(aligned.indices.size());
}

absl::StatusOr<double> FauxMetric(const std::vector<std::string>& hyp_noisy,
                                  const std::vector<std::string>& hyp_clean,
                                  FauxBase base, const BleuParams& bleu,
                                  const ChrfParams& chrf) {
  if (hyp_noisy.size() != hyp_clean.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "faux metric: ", hyp_noisy.size(), " noisy vs ", hyp_clean.size(),
        " clean hypotheses"));
  }
  switch (base) {
    case FauxBase::kBleu:
      return CorpusBleu(hyp_noisy, hyp_clean, bleu);
    case FauxBase::kChrf:
      return CorpusChrf(hyp_noisy, hyp_clean, chrf);
  }
  return absl::InvalidArgumentError("unknown faux metric base");
}

absl::StatusOr<double> FauxFromScores(const ScoreFile& scores) {
  RETURN_IF_ERROR(ValidateScoreFile(scores));
  if (scores.rows.empty()) {
    return absl::InvalidArgumentError("faux metric over an empty score file");
  }
  return scores.Mean();
}

}  // namespace mtnoise
