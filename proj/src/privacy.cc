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

#include "ldpkde/privacy.h"

#include <cmath>
#include <cstdint>
#include <limits>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "ldpkde/kernels.h"
#include "ldpkde/random.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

absl::Status ValidateSensitivity(double delta, absl::string_view caller) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s: sensitivity must be finite and non-negative, got %g", caller,
        delta));
  }
  return absl::OkStatus();
}

// sqrt(2 log(1/(2 beta)) + 2 alpha) / alpha, the Gaussian factor per unit
// sensitivity.
absl::StatusOr<double> GaussianFactor(const PrivacyBudget& budget) {
  const double alpha = budget.alpha_eff();
  const double beta = budget.beta_eff();
  if (!(beta > 0.0 && beta < 0.5)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "budget-out-of-range: the Gaussian mechanism needs beta' in (0, 1/2), "
        "got beta' = %g",
        beta));
  }
  return std::sqrt(2.0 * std::log(1.0 / (2.0 * beta)) + 2.0 * alpha) / alpha;
}

// alpha' - log(1 - beta'); infinite at beta' = 1.
double LaplaceDenominator(const PrivacyBudget& budget) {
  const double beta = budget.beta_eff();
  if (beta >= 1.0) return std::numeric_limits<double>::infinity();
  return budget.alpha_eff() - std::log1p(-beta);
}

}  // namespace

absl::string_view MechanismToString(Mechanism m) {
  switch (m) {
    case Mechanism::kLaplace:
      return "laplace";
    case Mechanism::kGaussianProcess:
      return "gp";
  }
  return "unknown";
}

absl::StatusOr<Mechanism> MechanismFromString(absl::string_view name) {
  if (name == "laplace") return Mechanism::kLaplace;
  if (name == "gp" || name == "gaussian_process") {
    return Mechanism::kGaussianProcess;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", name, "'; expected laplace or gp"));
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double alpha, double beta,
                                                    int64_t n_releases) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "PrivacyBudget: alpha must be finite and positive, got %g", alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("PrivacyBudget: beta must lie in [0, 1], got %g", beta));
  }
  if (n_releases < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "PrivacyBudget: n_releases must be >= 1, got %d", n_releases));
  }
  return PrivacyBudget(alpha, beta, n_releases);
}

absl::StatusOr<PrivacyBudget> Compose(const PrivacyBudget& budget, int64_t k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Compose: k must be >= 1, got %d", k));
  }
  return PrivacyBudget::Create(budget.alpha(), budget.beta(),
                               budget.n_releases() * k);
}

absl::StatusOr<double> LaplaceScale(double delta, const PrivacyBudget& budget) {
  LDPKDE_RETURN_IF_ERROR(ValidateSensitivity(delta, "LaplaceScale"));
  return delta / LaplaceDenominator(budget);
}

absl::StatusOr<double> GaussianScale(double delta,
                                     const PrivacyBudget& budget) {
  LDPKDE_RETURN_IF_ERROR(ValidateSensitivity(delta, "GaussianScale"));
  LDPKDE_ASSIGN_OR_RETURN(const double factor, GaussianFactor(budget));
  return delta * factor;
}

absl::StatusOr<NoiseScale> CalibrateLaplace(const KernelSpec& spec, double h,
                                            const PrivacyBudget& budget) {
  LDPKDE_ASSIGN_OR_RETURN(const double delta, PointwiseSensitivity(spec, h));
  LDPKDE_ASSIGN_OR_RETURN(const double b, LaplaceScale(delta, budget));
  LDPKDE_ASSIGN_OR_RETURN(const double c,
                          NoiseCoefficient(spec, budget, Mechanism::kLaplace));
  return NoiseScale{Mechanism::kLaplace, b, c};
}

absl::StatusOr<NoiseScale> CalibrateGaussianProcess(
    const KernelSpec& spec, double h, const PrivacyBudget& budget) {
  LDPKDE_ASSIGN_OR_RETURN(const double delta, RkhsSensitivity(spec, h));
  LDPKDE_ASSIGN_OR_RETURN(const double sigma, GaussianScale(delta, budget));
  LDPKDE_ASSIGN_OR_RETURN(
      const double c,
      NoiseCoefficient(spec, budget, Mechanism::kGaussianProcess));
  return NoiseScale{Mechanism::kGaussianProcess, sigma, c};
}

absl::StatusOr<double> NoiseCoefficient(const KernelSpec& spec,
                                        const PrivacyBudget& budget,
                                        Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kLaplace:
      return 2.0 * std::sqrt(2.0) * spec.sup_norm / LaplaceDenominator(budget);
    case Mechanism::kGaussianProcess: {
      // Delta' h is the kernel's RKHS coefficient, whatever the bandwidth.
      LDPKDE_ASSIGN_OR_RETURN(const double delta_h, RkhsSensitivity(spec, 1.0));
      LDPKDE_ASSIGN_OR_RETURN(const double factor, GaussianFactor(budget));
      return delta_h * factor;
    }
  }
  return absl::InvalidArgumentError("NoiseCoefficient: unknown mechanism");
}

absl::StatusOr<LaplaceReleaser> LaplaceReleaser::Create(
    const KernelSpec& spec, double h, const PrivacyBudget& budget) {
  LDPKDE_ASSIGN_OR_RETURN(const double delta, PointwiseSensitivity(spec, h));
  LDPKDE_ASSIGN_OR_RETURN(const double b, LaplaceScale(delta, budget));
  return LaplaceReleaser(b);
}

absl::StatusOr<double> ReleaseScalarLaplace(double value,
                                            const KernelSpec& spec, double h,
                                            const PrivacyBudget& budget,
                                            RandomStream& rng) {
  LDPKDE_ASSIGN_OR_RETURN(const LaplaceReleaser releaser,
                          LaplaceReleaser::Create(spec, h, budget));
  return releaser.Release(value, rng);
}

}  // namespace ldpkde
