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

#include "ldpkde/gp_sampler.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "Eigen/Cholesky"
#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/types/span.h"
#include "ldpkde/kernels.h"
#include "ldpkde/privacy.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

absl::Status ValidatePoints(absl::Span<const double> points) {
  if (points.empty()) {
    return absl::InvalidArgumentError("BuildGram: grid is empty");
  }
  if (points.size() > static_cast<size_t>(kMaxGridPoints)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "BuildGram: grid has %d points, at most %d supported", points.size(),
        kMaxGridPoints));
  }
  std::vector<double> sorted(points.begin(), points.end());
  for (double p : sorted) {
    if (!std::isfinite(p)) {
      return absl::InvalidArgumentError("BuildGram: grid points must be finite");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return absl::InvalidArgumentError("BuildGram: grid has duplicate points");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<GramMatrix> BuildGram(const KernelSpec& spec,
                                     absl::Span<const double> points,
                                     double h) {
  if (!spec.is_positive_definite) {
    return absl::FailedPreconditionError(
        absl::StrCat("BuildGram: unsupported kernel '",
                     KernelToString(spec.name),
                     "' is not positive definite and cannot be a covariance"));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("BuildGram: bandwidth must be positive, got %g", h));
  }
  LDPKDE_RETURN_IF_ERROR(ValidatePoints(points));

  const int m = static_cast<int>(points.size());
  GramMatrix gram;
  gram.points_.assign(points.begin(), points.end());
  gram.h_ = h;
  gram.entries_.resize(m, m);
  for (int i = 0; i < m; ++i) {
    gram.entries_(i, i) = KernelProfile(spec.name, 0.0);
    for (int j = 0; j < i; ++j) {
      const double k = KernelProfile(spec.name, (points[i] - points[j]) / h);
      gram.entries_(i, j) = k;
      gram.entries_(j, i) = k;
    }
  }

  const double base = std::numeric_limits<double>::epsilon() * m *
                      KernelProfile(spec.name, 0.0);
  for (int k = -1; k <= GramMatrix::kMaxJitterExponent; ++k) {
    const double jitter = k < 0 ? 0.0 : base * std::pow(10.0, k);
    Eigen::MatrixXd shifted = gram.entries_;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      gram.jitter_ = jitter;
      gram.factor_ = llt.matrixL();
      return gram;
    }
  }
  return absl::InternalError(absl::StrFormat(
      "degenerate-gram: Cholesky failed for %d points at h = %g even with "
      "jitter %g",
      m, h, base * std::pow(10.0, GramMatrix::kMaxJitterExponent)));
}

void SamplePathInto(const GramMatrix& gram, RandomStream& rng,
                    absl::Span<double> out) {
  const int m = gram.size();
  Eigen::VectorXd z(m);
  for (int i = 0; i < m; ++i) z(i) = rng.StandardNormal();
  const Eigen::MatrixXd& l = gram.cholesky_factor();
  for (int i = 0; i < m; ++i) {
    out[i] = l.row(i).head(i + 1).dot(z.head(i + 1));
  }
}

std::vector<double> SamplePath(const GramMatrix& gram, RandomStream& rng) {
  std::vector<double> path(gram.size());
  SamplePathInto(gram, rng, absl::MakeSpan(path));
  return path;
}

absl::StatusOr<CurveReleaser> CurveReleaser::Create(
    const KernelSpec& spec, absl::Span<const double> points, double h,
    const PrivacyBudget& budget, double scale_factor) {
  if (!(scale_factor >= 0.0) || !std::isfinite(scale_factor)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "CurveReleaser: scale factor must be non-negative, got %g",
        scale_factor));
  }
  LDPKDE_ASSIGN_OR_RETURN(const NoiseScale noise,
                          CalibrateGaussianProcess(spec, h, budget));
  LDPKDE_ASSIGN_OR_RETURN(GramMatrix gram, BuildGram(spec, points, h));
  return CurveReleaser(spec.name, std::move(gram), noise.scale * scale_factor);
}

void CurveReleaser::ReleaseInto(double x, RandomStream& rng,
                                absl::Span<double> out) const {
  const std::vector<double>& grid = gram_.points();
  const double h = gram_.h();
  if (sigma_ > 0.0) {
    SamplePathInto(gram_, rng, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
  for (size_t j = 0; j < grid.size(); ++j) {
    out[j] = ScaledKernelValue(kernel_, x - grid[j], h) + sigma_ * out[j];
  }
}

PrivateCurve CurveReleaser::Release(double x, int64_t owner_id,
                                    RandomStream& rng) const {
  PrivateCurve curve;
  curve.grid = gram_.points();
  curve.values.resize(curve.grid.size());
  ReleaseInto(x, rng, absl::MakeSpan(curve.values));
  curve.mechanism = Mechanism::kGaussianProcess;
  curve.h = gram_.h();
  curve.noise_scale = sigma_;
  curve.jitter = gram_.jitter_applied();
  curve.owner_id = owner_id;
  return curve;
}

absl::StatusOr<PrivateCurve> ReleaseCurve(const KernelSpec& spec, double x,
                                          absl::Span<const double> points,
                                          double h,
                                          const PrivacyBudget& budget,
                                          RandomStream& rng) {
  LDPKDE_ASSIGN_OR_RETURN(const CurveReleaser releaser,
                          CurveReleaser::Create(spec, points, h, budget));
  return releaser.Release(x, /*owner_id=*/0, rng);
}

absl::StatusOr<PrivateCurve> ReleaseLaplaceCurve(
    const KernelSpec& spec, double x, absl::Span<const double> points,
    double h, const PrivacyBudget& budget, RandomStream& rng) {
  if (points.empty()) {
    return absl::InvalidArgumentError("ReleaseLaplaceCurve: grid is empty");
  }
  LDPKDE_ASSIGN_OR_RETURN(
      const PrivacyBudget per_point,
      Compose(budget, static_cast<int64_t>(points.size())));
  LDPKDE_ASSIGN_OR_RETURN(const LaplaceReleaser releaser,
                          LaplaceReleaser::Create(spec, h, per_point));
  PrivateCurve curve;
  curve.grid.assign(points.begin(), points.end());
  curve.values.reserve(points.size());
  for (double t : points) {
    curve.values.push_back(
        releaser.Release(ScaledKernelValue(spec.name, x - t, h), rng));
  }
  curve.mechanism = Mechanism::kLaplace;
  curve.h = h;
  curve.noise_scale = releaser.scale();
  return curve;
}

}  // namespace ldpkde
