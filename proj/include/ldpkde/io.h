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

#ifndef LDPKDE_IO_H_
#define LDPKDE_IO_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "ldpkde/audit.h"
#include "ldpkde/estimator.h"
#include "ldpkde/lepski.h"
#include "ldpkde/simulate.h"

namespace ldpkde {

// 17 significant digits; round-trips every double.
std::string FormatDouble(double v);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

// One real per line; blank lines and lines starting with '#' are skipped.
// Parse errors name the line.
absl::StatusOr<std::vector<double>> ParseObservations(absl::string_view text);

// CSV with header owner_id,h,t,z. Rows run over bandwidths, then owners in
// insertion order, then grid points.
std::string DatasetCsv(const PrivateDataset& dataset);

// Sidecar with the budget, mechanism, kernel, grid, bandwidths and noise
// constants. `run_config_json` (an object, or empty) is embedded verbatim
// under "run_config".
absl::StatusOr<std::string> DatasetMetadataJson(
    const PrivateDataset& dataset, absl::string_view run_config_json);

// Rebuilds a dataset from the two files above.
absl::StatusOr<PrivateDataset> ParseDataset(absl::string_view csv,
                                            absl::string_view metadata_json);

// The "run_config" object of a metadata file, or "{}" if absent.
absl::StatusOr<std::string> RunConfigFromMetadata(
    absl::string_view metadata_json);

// CSV with header n,rule,h,mse,mc_se,reps.
std::string MseReportCsv(absl::Span<const MseRow> rows);
// Rows in full plus one rate fit per labelled rule. The first fit is also
// reported at the top level as fitted_slope / slope_se.
std::string MseSummaryJson(
    absl::Span<const MseRow> rows,
    const std::vector<std::pair<std::string, RateFit>>& fits,
    absl::string_view run_config_json);

// Every (h, eta, |diff|, psi, ok) tuple and the selected bandwidth.
std::string LepskiTraceJson(const LepskiSelection& selection,
                            const BandwidthGrid& grid,
                            const LepskiConfig& cfg);

std::string AuditResultJson(const AuditConfig& config,
                            const AuditResult& result);

}  // namespace ldpkde

#endif  // LDPKDE_IO_H_
