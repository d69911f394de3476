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

#include "ldpkde/density.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "boost/math/distributions/normal.hpp"
#include "boost/math/tools/minima.hpp"
#include "ldpkde/kernels.h"
#include "ldpkde/quadrature.h"

namespace ldpkde {
namespace {

using std::numbers::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMixtureMean = 1.0;
constexpr double kMixtureSd = 0.5;
constexpr double kTargetTolerance = 1e-8;
constexpr double kTailMass = 1e-13;

double NormalPdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * pi));
}

double MixturePdf(double x) {
  return 0.5 * NormalPdf(x, -kMixtureMean, kMixtureSd) +
         0.5 * NormalPdf(x, kMixtureMean, kMixtureSd);
}

// Two-sided standard normal quantile for tail mass p.
double NormalTailRadius(double p) {
  boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(boost::math::complement(std_normal, p / 2.0));
}

// Half-width (in units of u) beyond which the kernel is numerically zero.
double KernelEffectiveRadius(KernelName name) {
  switch (name) {
    case KernelName::kGaussian:
      return 40.0;
    case KernelName::kExponential:
      return 60.0;
    default:
      return KernelSupportRadius(name);
  }
}

}  // namespace

Density::Density(DensityName name) : name_(name) {
  switch (name) {
    case DensityName::kGaussianStd:
      sup_norm_ = 1.0 / std::sqrt(2.0 * pi);
      sobolev_s_ = kInf;
      break;
    case DensityName::kLaplaceDensity:
      sup_norm_ = 0.5;
      sobolev_s_ = 1.5;
      kinks_ = {0.0};
      break;
    case DensityName::kGaussianMixture: {
      // Symmetric, so the mode sits in [0, 2].
      auto neg = [](double x) { return -MixturePdf(x); };
      const auto [x, fx] =
          boost::math::tools::brent_find_minima(neg, 0.0, 2.0, 52);
      sup_norm_ = -fx;
      sobolev_s_ = kInf;
      break;
    }
    case DensityName::kUniform01:
      sup_norm_ = 1.0;
      sobolev_s_ = 0.5;
      kinks_ = {0.0, 1.0};
      break;
  }
}

Density Density::Get(DensityName name) { return Density(name); }

absl::StatusOr<Density> Density::FromString(absl::string_view name) {
  for (DensityName d :
       {DensityName::kGaussianStd, DensityName::kLaplaceDensity,
        DensityName::kGaussianMixture, DensityName::kUniform01}) {
    if (Density(d).label() == name) return Density(d);
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown density '", name,
      "'; expected gaussian_std, laplace_density, gaussian_mixture or "
      "uniform01"));
}

absl::string_view Density::label() const {
  switch (name_) {
    case DensityName::kGaussianStd:
      return "gaussian_std";
    case DensityName::kLaplaceDensity:
      return "laplace_density";
    case DensityName::kGaussianMixture:
      return "gaussian_mixture";
    case DensityName::kUniform01:
      return "uniform01";
  }
  return "unknown";
}

double Density::Pdf(double x) const {
  switch (name_) {
    case DensityName::kGaussianStd:
      return NormalPdf(x, 0.0, 1.0);
    case DensityName::kLaplaceDensity:
      return 0.5 * std::exp(-std::abs(x));
    case DensityName::kGaussianMixture:
      return MixturePdf(x);
    case DensityName::kUniform01:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
  }
  return 0.0;
}

double Density::Sample(RandomStream& rng) const {
  switch (name_) {
    case DensityName::kGaussianStd:
      return rng.StandardNormal();
    case DensityName::kLaplaceDensity:
      return rng.StandardLaplace();
    case DensityName::kGaussianMixture: {
      const double center =
          rng.Uniform01() < 0.5 ? -kMixtureMean : kMixtureMean;
      return center + kMixtureSd * rng.StandardNormal();
    }
    case DensityName::kUniform01:
      return rng.Uniform01();
  }
  return 0.0;
}

void Density::Window(double mass, double* lo, double* hi) const {
  switch (name_) {
    case DensityName::kGaussianStd: {
      const double r = NormalTailRadius(mass);
      *lo = -r;
      *hi = r;
      return;
    }
    case DensityName::kLaplaceDensity:
      *lo = std::log(mass);
      *hi = -std::log(mass);
      return;
    case DensityName::kGaussianMixture: {
      const double r = kMixtureMean + kMixtureSd * NormalTailRadius(mass);
      *lo = -r;
      *hi = r;
      return;
    }
    case DensityName::kUniform01:
      *lo = 0.0;
      *hi = 1.0;
      return;
  }
}

absl::StatusOr<double> SmoothedTarget(const Density& density,
                                      const KernelSpec& spec, double h,
                                      double t) {
  if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(t)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "SmoothedTarget: need finite t and h > 0 (got t = %g, h = %g)", t, h));
  }
  const KernelName kernel = spec.name;
  auto integrand = [&density, kernel, h, t](double u) {
    return ScaledKernelValue(kernel, u - t, h) * density.Pdf(u);
  };

  double lo = 0.0;
  double hi = 0.0;
  density.Window(kTailMass, &lo, &hi);
  std::vector<double> cuts(density.kinks());

  if (kernel == KernelName::kSinc) {
    // Symmetric window about t so every discarded point is at least `radius`
    // away from t.
    const double radius = std::max({t - lo, hi - t, h});
    const long pieces = static_cast<long>(std::ceil(radius / h));
    for (long k = -pieces; k <= pieces; ++k) {
      cuts.push_back(t + static_cast<double>(k) * h);
    }
    lo = t - static_cast<double>(pieces) * h;
    hi = t + static_cast<double>(pieces) * h;
  } else {
    const double reach = KernelEffectiveRadius(kernel) * h;
    lo = std::max(lo, t - reach);
    hi = std::min(hi, t + reach);
    if (!(lo < hi)) return 0.0;
    for (double k : KernelKinks(kernel)) cuts.push_back(t + k * h);
  }

  absl::StatusOr<double> value =
      IntegratePiecewise(integrand, lo, hi, cuts, kTargetTolerance);
  if (!value.ok()) {
    return absl::InternalError(absl::StrFormat(
        "SmoothedTarget(%s, %s, h = %g, t = %g): %s", density.label(),
        KernelToString(kernel), h, t, value.status().message()));
  }
  return *value;
}

}  // namespace ldpkde
