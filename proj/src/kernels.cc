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

#include "ldpkde/kernels.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "boost/math/special_functions/sin_pi.hpp"

namespace ldpkde {
namespace {

using std::numbers::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stationary point of sin(pi u)/(pi u) in (1, 2): root of tan(pi u) = pi u.
constexpr double kSincArgMin = 1.4302966531242027;

KernelSpec MakeSpec(KernelName name) {
  switch (name) {
    case KernelName::kSinc:
      // Plancherel with F[sinc] = 1_[-pi, pi] gives the integral of sinc^2.
      return {name, 1.0, 1.0, true, std::sqrt(2.6)};
    case KernelName::kGaussian:
      return {name, 1.0 / std::sqrt(2.0 * pi), 0.5 / std::sqrt(pi), true,
              1.0 / std::sqrt(pi)};
    case KernelName::kTriangular:
      return {name, 1.0, 2.0 / 3.0, true, std::sqrt(2.0)};
    case KernelName::kExponential:
      return {name, 0.5, 0.25, true, 1.0 / std::sqrt(2.0)};
    case KernelName::kRectangular:
      return {name, 0.5, 0.5, false, std::nullopt};
    case KernelName::kEpanechnikov:
      return {name, 0.75, 0.6, false, std::nullopt};
    case KernelName::kBiweight:
      return {name, 15.0 / 16.0, 5.0 / 7.0, false, std::nullopt};
  }
  return {name, 0.0, 0.0, false, std::nullopt};
}

const KernelSpec kSpecs[] = {
    MakeSpec(KernelName::kSinc),        MakeSpec(KernelName::kGaussian),
    MakeSpec(KernelName::kTriangular),  MakeSpec(KernelName::kExponential),
    MakeSpec(KernelName::kRectangular), MakeSpec(KernelName::kEpanechnikov),
    MakeSpec(KernelName::kBiweight),
};

}  // namespace

const KernelSpec& GetKernel(KernelName name) {
  return kSpecs[static_cast<int>(name)];
}

absl::string_view KernelToString(KernelName name) {
  switch (name) {
    case KernelName::kSinc:
      return "sinc";
    case KernelName::kGaussian:
      return "gaussian";
    case KernelName::kTriangular:
      return "triangular";
    case KernelName::kExponential:
      return "exponential";
    case KernelName::kRectangular:
      return "rectangular";
    case KernelName::kEpanechnikov:
      return "epanechnikov";
    case KernelName::kBiweight:
      return "biweight";
  }
  return "unknown";
}

absl::StatusOr<KernelSpec> KernelFromString(absl::string_view name) {
  for (KernelName k : kAllKernels) {
    if (KernelToString(k) == name) return GetKernel(k);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown kernel '", name,
                   "'; expected one of sinc, gaussian, triangular, "
                   "exponential, rectangular, epanechnikov, biweight"));
}

double KernelValue(KernelName name, double u) {
  const double a = std::abs(u);
  switch (name) {
    case KernelName::kSinc:
      // Below 1e-8 the Taylor remainder (pi u)^2/6 is under one ulp.
      if (a < 1e-8) return 1.0;
      // sin_pi reduces the argument exactly, so sinc vanishes at integers.
      return boost::math::sin_pi(u) / (pi * u);
    case KernelName::kGaussian:
      return std::exp(-0.5 * u * u) / std::sqrt(2.0 * pi);
    case KernelName::kTriangular:
      return a <= 1.0 ? 1.0 - a : 0.0;
    case KernelName::kExponential:
      return 0.5 * std::exp(-a);
    case KernelName::kRectangular:
      return a <= 1.0 ? 0.5 : 0.0;
    case KernelName::kEpanechnikov:
      return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelName::kBiweight: {
      if (a > 1.0) return 0.0;
      const double s = 1.0 - u * u;
      return 15.0 / 16.0 * s * s;
    }
  }
  return 0.0;
}

double KernelProfile(KernelName name, double u) {
  const double a = std::abs(u);
  switch (name) {
    case KernelName::kSinc:
      return KernelValue(name, u);
    case KernelName::kGaussian:
      return std::exp(-0.5 * u * u);
    case KernelName::kTriangular:
      return a <= 1.0 ? 1.0 - a : 0.0;
    case KernelName::kExponential:
      return std::exp(-a);
    case KernelName::kRectangular:
      return a <= 1.0 ? 1.0 : 0.0;
    case KernelName::kEpanechnikov:
      return a <= 1.0 ? 1.0 - u * u : 0.0;
    case KernelName::kBiweight: {
      if (a > 1.0) return 0.0;
      const double s = 1.0 - u * u;
      return s * s;
    }
  }
  return 0.0;
}

absl::StatusOr<double> EvalKernel(const KernelSpec& spec, double u) {
  if (!std::isfinite(u)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("EvalKernel: argument must be finite, got %g", u));
  }
  return KernelValue(spec.name, u);
}

absl::StatusOr<double> PointwiseSensitivity(const KernelSpec& spec, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "PointwiseSensitivity: bandwidth must be positive, got %g", h));
  }
  return 2.0 * spec.sup_norm / h;
}

absl::StatusOr<double> RkhsSensitivity(const KernelSpec& spec, double h) {
  if (!spec.is_positive_definite || !spec.rkhs_sensitivity_coeff.has_value()) {
    return absl::FailedPreconditionError(
        absl::StrCat("RkhsSensitivity: unsupported kernel '",
                     KernelToString(spec.name),
                     "' is not positive definite"));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "RkhsSensitivity: bandwidth must be positive, got %g", h));
  }
  return *spec.rkhs_sensitivity_coeff / h;
}

absl::StatusOr<double> CertifyPositiveDefinite(
    const KernelSpec& spec, absl::Span<const double> points,
    absl::Span<const double> coeffs) {
  if (points.size() != coeffs.size() || points.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "CertifyPositiveDefinite: need equally many points and coefficients "
        "(k >= 1), got %d and %d",
        points.size(), coeffs.size()));
  }
  double form = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = 0; j < points.size(); ++j) {
      form += coeffs[i] * coeffs[j] *
              KernelProfile(spec.name, points[i] - points[j]);
    }
  }
  return form;
}

std::optional<PdWitness> NonPositiveDefiniteWitness(KernelName name) {
  switch (name) {
    case KernelName::kRectangular:
      return PdWitness{{0.0, 0.75, 1.5}, {1.0, -1.0, 1.0}};
    case KernelName::kEpanechnikov:
      return PdWitness{{0.0, 0.5, 1.0}, {-0.9, 1.0, -0.9}};
    case KernelName::kBiweight:
      return PdWitness{{0.25, -0.25, -0.75, 0.5}, {0.7, -0.4, 0.2, -0.5}};
    default:
      return std::nullopt;
  }
}

double KernelSupportRadius(KernelName name) {
  switch (name) {
    case KernelName::kSinc:
    case KernelName::kGaussian:
    case KernelName::kExponential:
      return kInf;
    default:
      return 1.0;
  }
}

std::vector<double> KernelKinks(KernelName name) {
  switch (name) {
    case KernelName::kSinc:
    case KernelName::kGaussian:
      return {};
    case KernelName::kTriangular:
      return {-1.0, 0.0, 1.0};
    case KernelName::kExponential:
      return {0.0};
    default:
      return {-1.0, 1.0};
  }
}

double KernelArgMin(KernelName name) {
  switch (name) {
    case KernelName::kSinc:
      return kSincArgMin;
    case KernelName::kGaussian:
      return 50.0;  // exp(-1250) underflows to 0
    case KernelName::kExponential:
      return 1000.0;
    default:
      return 2.0;
  }
}

}  // namespace ldpkde
