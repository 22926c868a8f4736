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

#include "mtnoise/report.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/file_util.h"
#include "mtnoise/status_macros.h"

namespace mtnoise {
namespace {

std::string CsvField(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string XmlEscape(const std::string& value) {
  std::string out;
  for (char c : value) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string FormatReportCsv(const std::vector<Trajectory>& trajectories) {
  std::string out = absl::StrCat(kReportCsvHeader, "\n");
  for (const auto& t : trajectories) {
    std::string slope;
    std::string rss;
    int n_points = 0;
    if (auto fit = FitSlope(t); fit.ok()) {
      slope = FormatDouble(fit->slope);
      rss = FormatDouble(fit->rss);
      n_points = fit->n_points;
    }
    absl::StrAppend(&out, CsvField(t.system), ",", CsvField(t.metric), ",",
                    CsvField(t.noise_type), ",", FormatDouble(t.clean_score),
                    ",", slope, ",", n_points, ",", rss, "\n");
  }
  return out;
}

std::string FormatWinLossCsv(const std::vector<WinLossEntry>& entries) {
  std::string out = absl::StrCat(kWinLossCsvHeader, "\n");
  for (const auto& e : entries) {
    absl::StrAppend(&out, CsvField(e.baseline), ",", CsvField(e.challenger), ",",
                    CsvField(e.metric), ",", CsvField(e.noise_type), ",",
                    FormatDouble(e.breakdown.p), ",",
                    FormatDouble(e.breakdown.improved), ",",
                    FormatDouble(e.breakdown.harmed), ",",
                    FormatDouble(e.breakdown.tied), "\n");
  }
  return out;
}

std::string RenderTrajectorySvg(const std::vector<Trajectory>& family) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 160, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double lo = INFINITY, hi = -INFINITY;
  for (const auto& t : family) {
    lo = std::min(lo, t.clean_score);
    hi = std::max(hi, t.clean_score);
    for (const auto& pt : t.points) {
      lo = std::min(lo, pt.score);
      hi = std::max(hi, pt.score);
    }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-9) lo -= 1, hi += 1;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  auto x_of = [&](double p) { return kLeft + p * plot_w; };
  auto y_of = [&](double s) { return kTop + (hi - s) / (hi - lo) * plot_h; };

  std::string title;
  if (!family.empty()) {
    title = absl::StrCat(family.front().metric, " / ", family.front().noise_type);
  }
  std::string svg = absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\">\n",
      kWidth, kHeight, kWidth, kHeight);
  absl::StrAppend(&svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  absl::StrAppendFormat(&svg,
                        "<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" "
                        "font-size=\"14\">%s</text>\n",
                        kLeft, XmlEscape(title));
  // Axes.
  absl::StrAppendFormat(&svg,
                        "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                        "stroke=\"black\"/>\n",
                        kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h);
  absl::StrAppendFormat(&svg,
                        "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                        "stroke=\"black\"/>\n",
                        kLeft, kTop, kLeft, kTop + plot_h);
  for (int k = 0; k <= 5; ++k) {
    const double p = k / 5.0;
    absl::StrAppendFormat(&svg,
                          "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                          "font-size=\"11\" text-anchor=\"middle\">%.1f</text>\n",
                          x_of(p), kTop + plot_h + 16, p);
    const double s = lo + (hi - lo) * k / 5.0;
    absl::StrAppendFormat(&svg,
                          "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                          "font-size=\"11\" text-anchor=\"end\">%.2f</text>\n",
                          kLeft - 6, y_of(s) + 4, s);
  }
  absl::StrAppendFormat(&svg,
                        "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                        "font-size=\"12\" text-anchor=\"middle\">proportion of "
                        "noised tokens</text>\n",
                        kLeft + plot_w / 2, kHeight - 12);

  for (size_t i = 0; i < family.size(); ++i) {
    const auto& t = family[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string points = absl::StrFormat("%.2f,%.2f", x_of(0), y_of(t.clean_score));
    for (const auto& pt : t.points) {
      absl::StrAppendFormat(&points, " %.2f,%.2f", x_of(pt.p), y_of(pt.score));
    }
    absl::StrAppendFormat(&svg,
                          "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"2\" "
                          "points=\"%s\"/>\n",
                          color, points);
    const double ly = kTop + 16 * static_cast<double>(i);
    absl::StrAppendFormat(&svg,
                          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                          "stroke=\"%s\" stroke-width=\"2\"/>\n",
                          kLeft + plot_w + 12, ly, kLeft + plot_w + 32, ly, color);
    absl::StrAppendFormat(&svg,
                          "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                          "font-size=\"11\">%s</text>\n",
                          kLeft + plot_w + 38, ly + 4, XmlEscape(t.system));
  }
  svg += "</svg>\n";
  return svg;
}

absl::Status EmitReport(const std::vector<Trajectory>& trajectories,
                        const std::vector<WinLossEntry>& breakdowns,
                        const std::filesystem::path& out_dir) {
  RETURN_IF_ERROR(
      WriteFileAtomic(out_dir / "report.csv", FormatReportCsv(trajectories)));
  RETURN_IF_ERROR(
      WriteFileAtomic(out_dir / "winloss.csv", FormatWinLossCsv(breakdowns)));
  std::map<std::pair<std::string, std::string>, std::vector<Trajectory>> families;
  for (const auto& t : trajectories) {
    families[{t.metric, t.noise_type}].push_back(t);
  }
  for (const auto& [key, family] : families) {
    RETURN_IF_ERROR(WriteFileAtomic(
        out_dir / absl::StrCat(key.first, ".", key.second, ".svg"),
        RenderTrajectorySvg(family)));
  }
  return absl::OkStatus();
}

}  // namespace mtnoise
