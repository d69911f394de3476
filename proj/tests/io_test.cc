// Copyright 2026 The ldpkde Authors
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

#include "ldpkde/io.h"

#include <cmath>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "ldpkde/estimator.h"
#include "ldpkde/lepski.h"
#include "ldpkde/simulate.h"

namespace ldpkde {
namespace {

using json = nlohmann::json;

TEST(FormatDoubleTest, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
}

TEST(ParseObservationsTest, SkipsCommentsAndBlanks) {
  auto obs = *ParseObservations("# header\n1.5\n\n  -2\n3e-1\n");
  EXPECT_EQ(obs, (std::vector<double>{1.5, -2.0, 0.3}));
}

TEST(ParseObservationsTest, ErrorsNameTheLine) {
  auto bad = ParseObservations("1\n2\nthree\n");
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kDataLoss);
  EXPECT_NE(bad.status().message().find("3"), std::string::npos);
  EXPECT_EQ(ParseObservations("nan\n").status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(ReadFileTest, MissingFileIsNotFound) {
  EXPECT_EQ(ReadFile("/nonexistent/ldpkde/file").status().code(),
            absl::StatusCode::kNotFound);
}

PrivateDataset Sample() {
  PrivateDataset ds = *PrivateDataset::Create(
      {-0.5, 0.0, 0.5}, {1.0, 0.5}, Mechanism::kLaplace, KernelName::kSinc,
      *PrivacyBudget::Create(2.0, 0.0, 6));
  for (int64_t owner : {7, 3, 11}) {
    for (int b = 0; b < 2; ++b) {
      std::vector<double> z = {owner + 0.1 * b, -1.0 / owner, 1e-17 * owner};
      EXPECT_TRUE(ds.AddValues(owner, b, z).ok());
    }
  }
  return ds;
}

TEST(DatasetIoTest, CsvShape) {
  const std::string csv = DatasetCsv(Sample());
  std::vector<std::string> lines = absl::StrSplit(csv, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 1u + 2 * 3 * 3);
  EXPECT_EQ(lines[0], "owner_id,h,t,z");
  EXPECT_EQ(lines[1], "7,1,-0.5,7");
}

TEST(DatasetIoTest, MetadataContents) {
  const json meta = json::parse(*DatasetMetadataJson(Sample(), R"({"seed": 4})"));
  EXPECT_EQ(meta["budget"]["alpha"], 2.0);
  EXPECT_EQ(meta["budget"]["n_releases"], 6);
  EXPECT_DOUBLE_EQ(meta["budget"]["alpha_eff"].get<double>(), 2.0 / 6);
  EXPECT_EQ(meta["mechanism"], "laplace");
  EXPECT_EQ(meta["kernel"], "sinc");
  EXPECT_EQ(meta["n"], 3);
  EXPECT_EQ(meta["run_config"]["seed"], 4);
  EXPECT_EQ(meta["bandwidths"].size(), 2u);
}

TEST(DatasetIoTest, RoundTrip) {
  const PrivateDataset ds = Sample();
  const std::string csv = DatasetCsv(ds);
  const std::string meta = *DatasetMetadataJson(ds, "");
  const PrivateDataset back = *ParseDataset(csv, meta);
  EXPECT_EQ(back.grid(), ds.grid());
  EXPECT_EQ(back.bandwidths(), ds.bandwidths());
  EXPECT_EQ(back.owner_ids(), ds.owner_ids());
  EXPECT_EQ(back.budget().n_releases(), 6);
  for (int b = 0; b < 2; ++b) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(*back.AggregateAt(b, j), *ds.AggregateAt(b, j));
    }
  }
  EXPECT_EQ(DatasetCsv(back), csv);
  EXPECT_TRUE(json::parse(*RunConfigFromMetadata(meta)).empty());
}

TEST(DatasetIoTest, CorruptInputs) {
  const PrivateDataset ds = Sample();
  const std::string meta = *DatasetMetadataJson(ds, "");
  EXPECT_EQ(ParseDataset("owner_id,h,t,z\n1,1,0,abc\n", meta).status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_EQ(ParseDataset("wrong,header\n", meta).status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_FALSE(ParseDataset(DatasetCsv(ds), "{not json").ok());
  // A row at a bandwidth the metadata does not list.
  EXPECT_FALSE(ParseDataset("owner_id,h,t,z\n1,0.3,0,1\n", meta).ok());
}

TEST(ReportIoTest, MseCsvAndSummary) {
  MseRow r;
  r.n = 256;
  r.rule = RuleKind::kOracle;
  r.h = 0.25;
  r.mse = 0.01;
  r.mc_se = 0.001;
  r.reps = 500;
  r.smoothed_target = NAN;
  const std::string csv = MseReportCsv({r});
  EXPECT_EQ(csv, "n,rule,h,mse,mc_se,reps\n256,oracle,0.25,0.01,0.001,500\n");
  const json s = json::parse(MseSummaryJson(
      {r}, {{"oracle", RateFit{-0.3, 0.02, 1.0}}}, "{}"));
  EXPECT_EQ(s["fitted_slope"], -0.3);
  EXPECT_EQ(s["slope_se"], 0.02);
  EXPECT_TRUE(s["rows"][0]["smoothed_target"].is_null());
}

TEST(ReportIoTest, LepskiTrace) {
  auto grid = *BandwidthGrid::Build(100, 2.0, 1.0);
  const LepskiConfig cfg = *MakeLepskiConfig(
      2.0, 1.0, GetKernel(KernelName::kSinc), Mechanism::kLaplace,
      *PrivacyBudget::Create(1.0, 0.0), 0.0, grid);
  const LepskiSelection sel = SelectFromEstimates(
      {0.5, 0.5, 5.0}, grid.bandwidths(), [](int, int) { return 1.0; });
  const json t = json::parse(LepskiTraceJson(sel, grid, cfg));
  EXPECT_EQ(t["h_hat"], 0.25);
  EXPECT_EQ(t["comparisons"].size(), 6u);
}

}  // namespace
}  // namespace ldpkde
