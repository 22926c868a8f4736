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

#ifndef MTNOISE_REPORT_H_
#define MTNOISE_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "mtnoise/analysis.h"

namespace mtnoise {

struct WinLossEntry {
  std::string baseline;
  std::string challenger;
  std::string metric;
  std::string noise_type;
  WinLossBreakdown breakdown;
};

inline constexpr char kReportCsvHeader[] =
    "system,metric,noise_type,clean,slope,n_points,rss";
inline constexpr char kWinLossCsvHeader[] =
    "baseline,challenger,metric,noise_type,p,improved,harmed,tied";

// One row per trajectory, in the order given. Trajectories without points
// get empty slope and rss fields.
std::string FormatReportCsv(const std::vector<Trajectory>& trajectories);
std::string FormatWinLossCsv(const std::vector<WinLossEntry>& entries);

// Line chart of one family (same metric and noise type): one polyline per
// system, clean score plotted at p = 0.
std::string RenderTrajectorySvg(const std::vector<Trajectory>& family);

// Writes report.csv, winloss.csv and one <metric>.<noise_type>.svg per
// family into `out_dir`. Output is a deterministic function of the input.
absl::Status EmitReport(const std::vector<Trajectory>& trajectories,
                        const std::vector<WinLossEntry>& breakdowns,
                        const std::filesystem::path& out_dir);

}  // namespace mtnoise

#endif  // MTNOISE_REPORT_H_
