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

#ifndef LDPKDE_ESTIMATOR_H_
#define LDPKDE_ESTIMATOR_H_

#include <cstdint>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "ldpkde/kernels.h"
#include "ldpkde/private_curve.h"
#include "ldpkde/privacy.h"

namespace ldpkde {

// Releases of n owners, each at every bandwidth of a shared set and on a
// shared evaluation grid. Values are stored per bandwidth, owner-major.
//
// `budget` is the per-release budget the curves were calibrated with (already
// composed over all releases of one owner).
class PrivateDataset {
 public:
  // Relative tolerance for matching a requested t or h to a stored one.
  static constexpr double kMatchTolerance = 1e-9;

  static absl::StatusOr<PrivateDataset> Create(std::vector<double> grid,
                                               std::vector<double> bandwidths,
                                               Mechanism mechanism,
                                               KernelName kernel,
                                               PrivacyBudget budget);

  // Adds one owner's curve. The curve's grid, mechanism and bandwidth must
  // match the dataset; each (owner, bandwidth) pair may be added once.
  absl::Status Add(const PrivateCurve& curve);
  // Lower-level form: values for grid points in order.
  absl::Status AddValues(int64_t owner_id, int bandwidth_index,
                         absl::Span<const double> values);

  // f_hat_h(t): mean of Z_{i,h}(t) over owners. t must be a grid point and h
  // one of the released bandwidths. The mean is taken over the sorted values,
  // so the result does not depend on the order in which owners were added.
  absl::StatusOr<double> Aggregate(double h, double t) const;
  absl::StatusOr<double> AggregateAt(int bandwidth_index, int grid_index) const;

  // Linear interpolation of f_hat_h between neighbouring grid points. A
  // convenience for plotting; the accuracy and privacy guarantees are
  // pointwise at grid points only.
  absl::StatusOr<double> Interpolate(double h, double t) const;

  absl::StatusOr<int> BandwidthIndex(double h) const;
  absl::StatusOr<int> GridIndex(double t) const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }
  Mechanism mechanism() const { return mechanism_; }
  KernelName kernel() const { return kernel_; }
  const PrivacyBudget& budget() const { return budget_; }
  // Number of distinct owners.
  int64_t n() const { return static_cast<int64_t>(owner_ids_.size()); }
  const std::vector<int64_t>& owner_ids() const { return owner_ids_; }
  // Stored value Z_{owner,h}(t_j) by row (owner insertion order).
  double value(int bandwidth_index, int64_t row, int grid_index) const {
    return values_[bandwidth_index][row * grid_.size() + grid_index];
  }
  // True when every owner has released at every bandwidth.
  bool complete() const;

 private:
  PrivateDataset(std::vector<double> grid, std::vector<double> bandwidths,
                 Mechanism mechanism, KernelName kernel, PrivacyBudget budget);

  std::vector<double> grid_;
  std::vector<double> bandwidths_;
  Mechanism mechanism_;
  KernelName kernel_;
  PrivacyBudget budget_;
  std::vector<int64_t> owner_ids_;
  absl::flat_hash_map<int64_t, int64_t> row_of_owner_;
  // values_[b][row * m + j]; filled_[b][row].
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<bool>> filled_;
  std::vector<int64_t> filled_count_;
};

// v^2(h) = M int K^2 / (n h) + C^2 / (n h^2) with C from NoiseCoefficient.
absl::StatusOr<double> VarianceBound(const KernelSpec& spec,
                                     Mechanism mechanism,
                                     const PrivacyBudget& budget, double M,
                                     int64_t n, double h);
// Same with the noise constant given directly (C = 0: no privacy noise).
double VarianceBoundWithCoefficient(double M, double l2_norm_sq, double c,
                                    int64_t n, double h);

}  // namespace ldpkde

#endif  // LDPKDE_ESTIMATOR_H_
