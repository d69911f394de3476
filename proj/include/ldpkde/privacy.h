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

#ifndef LDPKDE_PRIVACY_H_
#define LDPKDE_PRIVACY_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldpkde/kernels.h"
#include "ldpkde/random.h"

namespace ldpkde {

enum class Mechanism { kLaplace, kGaussianProcess };

absl::string_view MechanismToString(Mechanism m);
// Accepts "laplace" and "gp" (also "gaussian_process").
absl::StatusOr<Mechanism> MechanismFromString(absl::string_view name);

// An (alpha, beta) budget shared by `n_releases` conditionally independent
// releases of the same datum. Each release runs at (alpha/k, beta/k), which
// by the composition lemma keeps the joint release (alpha, beta)-private.
class PrivacyBudget {
 public:
  // alpha > 0, beta in [0, 1], n_releases >= 1.
  static absl::StatusOr<PrivacyBudget> Create(double alpha, double beta,
                                              int64_t n_releases = 1);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int64_t n_releases() const { return n_releases_; }
  double alpha_eff() const { return alpha_ / static_cast<double>(n_releases_); }
  double beta_eff() const { return beta_ / static_cast<double>(n_releases_); }

 private:
  PrivacyBudget(double alpha, double beta, int64_t n_releases)
      : alpha_(alpha), beta_(beta), n_releases_(n_releases) {}

  double alpha_;
  double beta_;
  int64_t n_releases_;
};

// Splits the budget over k more releases: n_releases is multiplied by k.
absl::StatusOr<PrivacyBudget> Compose(const PrivacyBudget& budget, int64_t k);

// Minimal Laplace scale b = delta / (alpha' - log(1 - beta')).
// At beta' = 1 the release is unrestricted and b = 0.
absl::StatusOr<double> LaplaceScale(double delta, const PrivacyBudget& budget);

// Minimal Gaussian multiplier sigma = (delta/alpha') sqrt(2 log(1/(2 beta'))
// + 2 alpha'). Requires beta' in (0, 1/2).
absl::StatusOr<double> GaussianScale(double delta, const PrivacyBudget& budget);

// Calibrated noise for one kernel release at bandwidth h.
struct NoiseScale {
  Mechanism mechanism;
  // b for Laplace, sigma for the Gaussian process.
  double scale;
  // C with per-point noise standard deviation C / h.
  double c_ab;
};

// Laplace noise for the scalar K_h(X - t): sensitivity 2 ||K||_inf / h.
absl::StatusOr<NoiseScale> CalibrateLaplace(const KernelSpec& spec, double h,
                                            const PrivacyBudget& budget);

// Gaussian-process noise for the curve K_h(X - .): RKHS sensitivity c / h.
absl::StatusOr<NoiseScale> CalibrateGaussianProcess(
    const KernelSpec& spec, double h, const PrivacyBudget& budget);

// The h-free constant C_{alpha' beta'}:
//   Laplace: 2 sqrt(2) ||K||_inf / (alpha' - log(1 - beta'))
//   GP:      (Delta' h) sqrt(2 log(1/(2 beta')) + 2 alpha') / alpha'
absl::StatusOr<double> NoiseCoefficient(const KernelSpec& spec,
                                        const PrivacyBudget& budget,
                                        Mechanism mechanism);

// Adds calibrated Laplace noise to a precomputed K_h(X - t).
class LaplaceReleaser {
 public:
  static absl::StatusOr<LaplaceReleaser> Create(const KernelSpec& spec,
                                                double h,
                                                const PrivacyBudget& budget);

  double Release(double value, RandomStream& rng) const {
    return scale_ == 0.0 ? value : value + scale_ * rng.StandardLaplace();
  }
  double scale() const { return scale_; }

 private:
  explicit LaplaceReleaser(double scale) : scale_(scale) {}
  double scale_;
};

// value + b xi with xi ~ Laplace(1); `value` is K_h(X_i - t).
absl::StatusOr<double> ReleaseScalarLaplace(double value,
                                            const KernelSpec& spec, double h,
                                            const PrivacyBudget& budget,
                                            RandomStream& rng);

}  // namespace ldpkde

#endif  // LDPKDE_PRIVACY_H_
