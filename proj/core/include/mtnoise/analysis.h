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

#ifndef MTNOISE_ANALYSIS_H_
#define MTNOISE_ANALYSIS_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "mtnoise/corpus.h"

namespace mtnoise {

struct QualityPoint {
  double p = 0.0;
  double score = 0.0;

  friend bool operator==(const QualityPoint&, const QualityPoint&) = default;
};

// Corpus-level quality of one system under one metric as noise grows.
// Points have p in (0, 1], strictly increasing; the clean score is kept
// apart.
struct Trajectory {
  std::string system;
  std::string metric;
  std::string noise_type;
  double clean_score = 0.0;
  std::vector<QualityPoint> points;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

absl::Status ValidateTrajectory(const Trajectory& trajectory);

// Least-squares slope of the decline d_i = score_i - clean on p_i with no
// intercept: slope = sum(p_i d_i) / sum(p_i^2). Reads as the metric points
// lost when every token is noised.
struct SlopeFit {
  double slope = 0.0;
  int n_points = 0;
  double rss = 0.0;
};

absl::StatusOr<SlopeFit> FitSlope(const Trajectory& trajectory);

// Same fit over raw (p, decline) pairs. Pairs with p == 0 contribute
// nothing; at least one p must be nonzero.
absl::StatusOr<SlopeFit> FitSlopeThroughOrigin(
    const std::vector<std::pair<double, double>>& p_and_decline);

// Builds a trajectory from per-segment score files: each run's corpus score
// is its fixed-order mean. All runs must cover the clean run's indices and
// no p may repeat. Points come out sorted by p.
absl::StatusOr<Trajectory> BuildTrajectory(
    std::string system, std::string metric, std::string noise_type,
    const ScoreFile& clean, const std::vector<std::pair<double, ScoreFile>>& runs);

// Same, for metrics whose corpus score is computed directly (chrF, BLEU).
absl::StatusOr<Trajectory> BuildTrajectoryFromCorpusScores(
    std::string system, std::string metric, std::string noise_type,
    double clean_score, std::vector<QualityPoint> points);

struct WinLossBreakdown {
  double p = 0.0;
  double improved = 0.0;
  double harmed = 0.0;
  double tied = 0.0;
};

// Fractions of segments where the challenger beats the baseline by more
// than tie_epsilon, loses by more than tie_epsilon, or neither.
absl::StatusOr<WinLossBreakdown> WinLoss(const ScoreFile& baseline,
                                         const ScoreFile& challenger,
                                         double tie_epsilon = 0.0,
                                         double p = 0.0);

}  // namespace mtnoise

#endif  // MTNOISE_ANALYSIS_H_
