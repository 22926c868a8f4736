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

#include "mtnoise/analysis.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/quality.h"
#include "mtnoise/status_macros.h"

namespace mtnoise {

absl::Status ValidateTrajectory(const Trajectory& trajectory) {
  if (!std::isfinite(trajectory.clean_score)) {
    return absl::InvalidArgumentError("clean score is not finite");
  }
  double previous = 0.0;
  for (const auto& point : trajectory.points) {
    if (!(point.p > 0.0 && point.p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("trajectory point p=", point.p, " outside (0, 1]"));
    }
    if (point.p <= previous) {
      return absl::InvalidArgumentError(
          "trajectory points must have strictly increasing p");
    }
    if (!std::isfinite(point.score)) {
      return absl::InvalidArgumentError("trajectory score is not finite");
    }
    previous = point.p;
  }
  return absl::OkStatus();
}

absl::StatusOr<SlopeFit> FitSlopeThroughOrigin(
    const std::vector<std::pair<double, double>>& p_and_decline) {
  double sum_pd = 0.0;
  double sum_pp = 0.0;
  for (const auto& [p, d] : p_and_decline) {
    sum_pd += p * d;
    sum_pp += p * p;
  }
  if (sum_pp == 0.0) {
    return absl::InvalidArgumentError(
        "slope fit needs at least one point with nonzero noise level");
  }
  SlopeFit fit;
  fit.slope = sum_pd / sum_pp;
  for (const auto& [p, d] : p_and_decline) {
    if (p == 0.0) continue;
    const double r = d - fit.slope * p;
    fit.rss += r * r;
    ++fit.n_points;
  }
  return fit;
}

absl::StatusOr<SlopeFit> FitSlope(const Trajectory& trajectory) {
  RETURN_IF_ERROR(ValidateTrajectory(trajectory));
  if (trajectory.points.empty()) {
    return absl::InvalidArgumentError("slope fit needs at least one point");
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(trajectory.points.size());
  for (const auto& point : trajectory.points) {
    pairs.emplace_back(point.p, point.score - trajectory.clean_score);
  }
  return FitSlopeThroughOrigin(pairs);
}

absl::StatusOr<Trajectory> BuildTrajectoryFromCorpusScores(
    std::string system, std::string metric, std::string noise_type,
    double clean_score, std::vector<QualityPoint> points) {
  Trajectory t;
  t.system = std::move(system);
  t.metric = std::move(metric);
  t.noise_type = std::move(noise_type);
  t.clean_score = clean_score;
  std::stable_sort(points.begin(), points.end(),
                   [](const QualityPoint& a, const QualityPoint& b) {
                     return a.p < b.p;
                   });
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].p == points[i - 1].p) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate noise level p=", points[i].p));
    }
  }
  t.points = std::move(points);
  RETURN_IF_ERROR(ValidateTrajectory(t));
  return t;
}

absl::StatusOr<Trajectory> BuildTrajectory(
    std::string system, std::string metric, std::string noise_type,
    const ScoreFile& clean,
    const std::vector<std::pair<double, ScoreFile>>& runs) {
  RETURN_IF_ERROR(ValidateScoreFile(clean));
  std::vector<QualityPoint> points;
  for (const auto& [p, run] : runs) {
    // Alignment check: same index set as the clean run.
    ASSIGN_OR_RETURN(AlignedScores aligned, AlignScores(clean, run));
    (void)aligned;
    points.push_back(QualityPoint{p, run.Mean()});
  }
  return BuildTrajectoryFromCorpusScores(std::move(system), std::move(metric),
                                         std::move(noise_type), clean.Mean(),
                                         std::move(points));
}

absl::StatusOr<WinLossBreakdown> WinLoss(const ScoreFile& baseline,
                                         const ScoreFile& challenger,
                                         double tie_epsilon, double p) {
  if (!(tie_epsilon >= 0.0)) {
    return absl::InvalidArgumentError("tie epsilon must be >= 0");
  }
  ASSIGN_OR_RETURN(AlignedScores aligned, AlignScores(baseline, challenger));
  WinLossBreakdown out;
  out.p = p;
  const size_t n = aligned.indices.size();
  if (n == 0) {
    out.tied = 1.0;
    return out;
  }
  size_t improved = 0;
  size_t harmed = 0;
  for (size_t i = 0; i < n; ++i) {
    const double delta = aligned.b[i] - aligned.a[i];
    if (delta > tie_epsilon) {
      ++improved;
    } else if (-delta > tie_epsilon) {
      ++harmed;
    }
  }
  const size_t tied = n - improved - harmed;
  out.improved = static_cast<double>(improved) / static_cast<double>(n);
  out.harmed = static_cast<double>(harmed) / static_cast<double>(n);
  out.tied = static_cast<double>(tied) / static_cast<double>(n);
  return out;
}

}  // namespace mtnoise
