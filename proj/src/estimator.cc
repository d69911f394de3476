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

#include "ldpkde/estimator.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "absl/types/span.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

bool Matches(double a, double b) {
  return std::abs(a - b) <=
         PrivateDataset::kMatchTolerance * std::max(1.0, std::abs(b));
}

}  // namespace

PrivateDataset::PrivateDataset(std::vector<double> grid,
                               std::vector<double> bandwidths,
                               Mechanism mechanism, KernelName kernel,
                               PrivacyBudget budget)
    : grid_(std::move(grid)),
      bandwidths_(std::move(bandwidths)),
      mechanism_(mechanism),
      kernel_(kernel),
      budget_(budget),
      values_(bandwidths_.size()),
      filled_(bandwidths_.size()),
      filled_count_(bandwidths_.size(), 0) {}

absl::StatusOr<PrivateDataset> PrivateDataset::Create(
    std::vector<double> grid, std::vector<double> bandwidths,
    Mechanism mechanism, KernelName kernel, PrivacyBudget budget) {
  if (grid.empty()) {
    return absl::InvalidArgumentError("PrivateDataset: grid is empty");
  }
  for (size_t j = 0; j < grid.size(); ++j) {
    if (!std::isfinite(grid[j]) || (j > 0 && !(grid[j] > grid[j - 1]))) {
      return absl::InvalidArgumentError(
          "PrivateDataset: grid must be finite and strictly increasing");
    }
  }
  if (bandwidths.empty()) {
    return absl::InvalidArgumentError("PrivateDataset: no bandwidths");
  }
  for (size_t b = 0; b < bandwidths.size(); ++b) {
    if (!(bandwidths[b] > 0.0) || !std::isfinite(bandwidths[b])) {
      return absl::InvalidArgumentError(
          "PrivateDataset: bandwidths must be positive");
    }
    for (size_t c = 0; c < b; ++c) {
      if (Matches(bandwidths[b], bandwidths[c])) {
        return absl::InvalidArgumentError(
            "PrivateDataset: duplicate bandwidth");
      }
    }
  }
  return PrivateDataset(std::move(grid), std::move(bandwidths), mechanism,
                        kernel, budget);
}

absl::StatusOr<int> PrivateDataset::BandwidthIndex(double h) const {
  for (size_t b = 0; b < bandwidths_.size(); ++b) {
    if (Matches(h, bandwidths_[b])) return static_cast<int>(b);
  }
  return absl::NotFoundError(
      absl::StrFormat("missing-bandwidth: h = %.17g was not released", h));
}

absl::StatusOr<int> PrivateDataset::GridIndex(double t) const {
  auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
  for (auto cand : {it, it == grid_.begin() ? it : std::prev(it)}) {
    if (cand != grid_.end() && Matches(t, *cand)) {
      return static_cast<int>(cand - grid_.begin());
    }
  }
  return absl::NotFoundError(absl::StrFormat(
      "out-of-grid: t = %.17g is not a released grid point", t));
}

absl::Status PrivateDataset::AddValues(int64_t owner_id, int bandwidth_index,
                                       absl::Span<const double> values) {
  if (bandwidth_index < 0 ||
      bandwidth_index >= static_cast<int>(bandwidths_.size())) {
    return absl::InvalidArgumentError("PrivateDataset: bad bandwidth index");
  }
  if (values.size() != grid_.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "PrivateDataset: curve has %d values, grid has %d", values.size(),
        grid_.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError(
          "PrivateDataset: curve values must be finite");
    }
  }
  auto [it, inserted] = row_of_owner_.try_emplace(
      owner_id, static_cast<int64_t>(owner_ids_.size()));
  const int64_t row = it->second;
  if (inserted) {
    owner_ids_.push_back(owner_id);
    for (size_t b = 0; b < bandwidths_.size(); ++b) {
      values_[b].resize(owner_ids_.size() * grid_.size(), 0.0);
      filled_[b].push_back(false);
    }
  }
  if (filled_[bandwidth_index][row]) {
    return absl::AlreadyExistsError(absl::StrFormat(
        "PrivateDataset: owner %d already released at h = %.17g", owner_id,
        bandwidths_[bandwidth_index]));
  }
  std::copy(values.begin(), values.end(),
            values_[bandwidth_index].begin() + row * grid_.size());
  filled_[bandwidth_index][row] = true;
  ++filled_count_[bandwidth_index];
  return absl::OkStatus();
}

absl::Status PrivateDataset::Add(const PrivateCurve& curve) {
  if (curve.mechanism != mechanism_) {
    return absl::InvalidArgumentError("PrivateDataset: mechanism mismatch");
  }
  if (curve.grid.size() != grid_.size()) {
    return absl::InvalidArgumentError("PrivateDataset: grid mismatch");
  }
  for (size_t j = 0; j < grid_.size(); ++j) {
    if (!Matches(curve.grid[j], grid_[j])) {
      return absl::InvalidArgumentError("PrivateDataset: grid mismatch");
    }
  }
  LDPKDE_ASSIGN_OR_RETURN(const int b, BandwidthIndex(curve.h));
  return AddValues(curve.owner_id, b, curve.values);
}

bool PrivateDataset::complete() const {
  for (int64_t count : filled_count_) {
    if (count != n()) return false;
  }
  return n() > 0;
}

absl::StatusOr<double> PrivateDataset::AggregateAt(int bandwidth_index,
                                                   int grid_index) const {
  if (bandwidth_index < 0 ||
      bandwidth_index >= static_cast<int>(bandwidths_.size()) ||
      grid_index < 0 || grid_index >= static_cast<int>(grid_.size())) {
    return absl::InvalidArgumentError("Aggregate: index out of range");
  }
  if (n() == 0) {
    return absl::FailedPreconditionError("Aggregate: dataset is empty");
  }
  if (filled_count_[bandwidth_index] != n()) {
    return absl::NotFoundError(absl::StrFormat(
        "missing-bandwidth: only %d of %d owners released at h = %.17g",
        filled_count_[bandwidth_index], n(), bandwidths_[bandwidth_index]));
  }
  std::vector<double> column(n());
  for (int64_t row = 0; row < n(); ++row) {
    column[row] = value(bandwidth_index, row, grid_index);
  }
  std::sort(column.begin(), column.end());
  double sum = 0.0;
  for (double v : column) sum += v;
  return sum / static_cast<double>(n());
}

absl::StatusOr<double> PrivateDataset::Aggregate(double h, double t) const {
  LDPKDE_ASSIGN_OR_RETURN(const int b, BandwidthIndex(h));
  LDPKDE_ASSIGN_OR_RETURN(const int j, GridIndex(t));
  return AggregateAt(b, j);
}

absl::StatusOr<double> PrivateDataset::Interpolate(double h, double t) const {
  LDPKDE_ASSIGN_OR_RETURN(const int b, BandwidthIndex(h));
  if (absl::StatusOr<int> exact = GridIndex(t); exact.ok()) {
    return AggregateAt(b, *exact);
  }
  if (!(t > grid_.front() && t < grid_.back())) {
    return absl::NotFoundError(absl::StrFormat(
        "out-of-grid: t = %.17g lies outside [%.17g, %.17g]", t, grid_.front(),
        grid_.back()));
  }
  const int hi = static_cast<int>(
      std::upper_bound(grid_.begin(), grid_.end(), t) - grid_.begin());
  const int lo = hi - 1;
  LDPKDE_ASSIGN_OR_RETURN(const double f_lo, AggregateAt(b, lo));
  LDPKDE_ASSIGN_OR_RETURN(const double f_hi, AggregateAt(b, hi));
  const double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return (1.0 - w) * f_lo + w * f_hi;
}

double VarianceBoundWithCoefficient(double M, double l2_norm_sq, double c,
                                    int64_t n, double h) {
  const double nd = static_cast<double>(n);
  return M * l2_norm_sq / (nd * h) + c * c / (nd * h * h);
}

absl::StatusOr<double> VarianceBound(const KernelSpec& spec,
                                     Mechanism mechanism,
                                     const PrivacyBudget& budget, double M,
                                     int64_t n, double h) {
  if (!(M > 0.0) || n < 1 || !(h > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "VarianceBound: need M > 0, n >= 1, h > 0 (got %g, %d, %g)", M, n, h));
  }
  LDPKDE_ASSIGN_OR_RETURN(const double c,
                          NoiseCoefficient(spec, budget, mechanism));
  return VarianceBoundWithCoefficient(M, spec.l2_norm_sq, c, n, h);
}

}  // namespace ldpkde
