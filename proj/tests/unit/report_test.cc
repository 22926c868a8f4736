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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mtnoise/file_util.h"
#include "test_util.h"

namespace mtnoise {
namespace {

Trajectory Linear(std::string system, double slope) {
  Trajectory t{std::move(system), "chrf", "swap", 80.0, {}};
  for (int k = 1; k <= 10; ++k) t.points.push_back({k / 10.0, 80.0 + slope * k / 10.0});
  return t;
}

TEST(ReportTest, EmptyInputIsHeaderOnly) {
  EXPECT_EQ(FormatReportCsv({}), std::string(kReportCsvHeader) + "\n");
  EXPECT_EQ(FormatWinLossCsv({}), std::string(kWinLossCsvHeader) + "\n");
}

TEST(ReportTest, OneRowPerSystem) {
  const std::string csv = FormatReportCsv({Linear("a", -20), Linear("b", -5)});
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("\na,chrf,swap,80,-20,10,"), std::string::npos) << csv;
}

TEST(ReportTest, QuotesAwkwardNames) {
  const std::string csv = FormatReportCsv({Linear("a,\"b\"", -1)});
  EXPECT_NE(csv.find("\"a,\"\"b\"\"\""), std::string::npos) << csv;
}

TEST(ReportTest, CleanOnlyTrajectoryHasEmptySlope) {
  Trajectory t{"a", "chrf", "clean", 70.0, {}};
  EXPECT_NE(FormatReportCsv({t}).find("a,chrf,clean,70,,0,"), std::string::npos);
}

TEST(ReportTest, SvgEscapesAndDraws) {
  const std::string svg = RenderTrajectorySvg({Linear("<sys&>", -10)});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("&lt;sys&amp;&gt;"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(ReportTest, EmitIsDeterministic) {
  testing::TempDir a, b;
  const std::vector<Trajectory> ts = {Linear("x", -3), Linear("y", -30)};
  const std::vector<WinLossEntry> wl = {{"x", "y", "chrf", "swap", {0.1, 0.5, 0.25, 0.25}}};
  MTNOISE_ASSERT_OK(EmitReport(ts, wl, a.path()));
  MTNOISE_ASSERT_OK(EmitReport(ts, wl, b.path()));
  for (const char* name : {"report.csv", "winloss.csv", "chrf.swap.svg"}) {
    auto fa = ReadFile(a.path() / name);
    auto fb = ReadFile(b.path() / name);
    ASSERT_TRUE(fa.ok() && fb.ok()) << name;
    EXPECT_EQ(*fa, *fb);
  }
}

}  // namespace
}  // namespace mtnoise
