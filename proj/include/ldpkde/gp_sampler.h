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

#ifndef LDPKDE_GP_SAMPLER_H_
#define LDPKDE_GP_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "ldpkde/kernels.h"
#include "ldpkde/private_curve.h"
#include "ldpkde/privacy.h"
#include "ldpkde/random.h"

namespace ldpkde {

inline constexpr int kMaxGridPoints = 4096;

// Covariance of the masking process at a finite grid: entries
// profile((t_i - t_j) / h), factored once with Cholesky.
//
// If plain Cholesky fails, jitter 10^k * eps * m * K(0) is added to the
// diagonal for k = 0, 1, ... up to kMaxJitterExponent and the smallest
// working value is recorded. Sampling then uses entries + jitter * I.
class GramMatrix {
 public:
  static constexpr int kMaxJitterExponent = 10;

  const std::vector<double>& points() const { return points_; }
  double h() const { return h_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const Eigen::MatrixXd& cholesky_factor() const { return factor_; }
  double jitter_applied() const { return jitter_; }
  int size() const { return static_cast<int>(points_.size()); }

 private:
  friend absl::StatusOr<GramMatrix> BuildGram(const KernelSpec&,
                                              absl::Span<const double>,
                                              double);
  std::vector<double> points_;
  double h_ = 0.0;
  Eigen::MatrixXd entries_;
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
};

// Needs a positive definite kernel, finite distinct points (at most
// kMaxGridPoints) and h > 0.
absl::StatusOr<GramMatrix> BuildGram(const KernelSpec& spec,
                                     absl::Span<const double> points, double h);

// L z with z standard normal: one centred path with covariance
// entries + jitter * I.
std::vector<double> SamplePath(const GramMatrix& gram, RandomStream& rng);
void SamplePathInto(const GramMatrix& gram, RandomStream& rng,
                    absl::Span<double> out);

// Releases whole kernel curves x -> K_h(x - t_j) + sigma Xi(t_j) on a fixed
// grid. The Gram factor and sigma are computed once, so one releaser serves
// every owner.
class CurveReleaser {
 public:
  // sigma from the RKHS sensitivity; `scale_factor` multiplies it and is only
  // meant for audits and negative controls.
  static absl::StatusOr<CurveReleaser> Create(const KernelSpec& spec,
                                              absl::Span<const double> points,
                                              double h,
                                              const PrivacyBudget& budget,
                                              double scale_factor = 1.0);

  PrivateCurve Release(double x, int64_t owner_id, RandomStream& rng) const;
  // Values only, written to `out` (size must equal the grid size).
  void ReleaseInto(double x, RandomStream& rng, absl::Span<double> out) const;

  const GramMatrix& gram() const { return gram_; }
  double sigma() const { return sigma_; }

 private:
  CurveReleaser(KernelName kernel, GramMatrix gram, double sigma)
      : kernel_(kernel), gram_(std::move(gram)), sigma_(sigma) {}

  KernelName kernel_;
  GramMatrix gram_;
  double sigma_;
};

// One-shot form of CurveReleaser::Release.
absl::StatusOr<PrivateCurve> ReleaseCurve(const KernelSpec& spec, double x,
                                          absl::Span<const double> points,
                                          double h,
                                          const PrivacyBudget& budget,
                                          RandomStream& rng);

// Per-point Laplace release of a curve. Each grid point is its own release,
// so the budget is split over the grid size here before calibration.
absl::StatusOr<PrivateCurve> ReleaseLaplaceCurve(
    const KernelSpec& spec, double x, absl::Span<const double> points,
    double h, const PrivacyBudget& budget, RandomStream& rng);

}  // namespace ldpkde

#endif  // LDPKDE_GP_SAMPLER_H_
