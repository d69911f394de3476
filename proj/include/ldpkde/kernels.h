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

#ifndef LDPKDE_KERNELS_H_
#define LDPKDE_KERNELS_H_

#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"

namespace ldpkde {

enum class KernelName {
  kSinc,
  kGaussian,
  kTriangular,
  kExponential,
  kRectangular,
  kEpanechnikov,
  kBiweight,
};

inline constexpr KernelName kAllKernels[] = {
    KernelName::kSinc,        KernelName::kGaussian,
    KernelName::kTriangular,  KernelName::kExponential,
    KernelName::kRectangular, KernelName::kEpanechnikov,
    KernelName::kBiweight,
};

// A univariate smoothing kernel together with the constants needed to
// calibrate privacy noise for it.
//
// Every kernel is stored in density normalization (integral one):
//
//   sinc         sin(pi u) / (pi u)
//   gaussian     exp(-u^2/2) / sqrt(2 pi)
//   triangular   (1 - |u|) 1{|u| <= 1}
//   exponential  exp(-|u|) / 2
//   rectangular  1{|u| <= 1} / 2
//   epanechnikov 3/4 (1 - u^2) 1{|u| <= 1}
//   biweight     15/16 (1 - u^2)^2 1{|u| <= 1}
//
// When a kernel is used as a covariance function (x, y) -> K((x - y) / h) for
// the masking Gaussian process it enters through its unit-peak profile
// K(u) / K(0); see KernelProfile().
struct KernelSpec {
  KernelName name;
  // sup_u |K(u)|.
  double sup_norm;
  // Integral of K(u)^2.
  double l2_norm_sq;
  // Whether (x, y) -> K(x - y) is a positive definite kernel.
  bool is_positive_definite;
  // c with ||(h K_h)_x - (h K_h)_{x'}|| <= c / h in the RKHS of the
  // covariance K((x - y) / h). Only set for positive definite kernels.
  //
  // Writing K = K(0) * profile, the released curve (1/h) K((x - .) / h) is
  // K(0)/h times a kernel section, so its squared RKHS distance is
  // (K(0)/h)^2 * 2 * (1 - profile(x - x')) <= 2 K(0)^2 (1 - min profile) / h^2.
  //   gaussian     1/sqrt(pi)       (K(0)^2 = 1/(2 pi), min profile 0)
  //   sinc         sqrt(2.6)        (uses the bound sinc >= -0.3)
  //   triangular   sqrt(2)          (K(0) = 1, min profile 0)
  //   exponential  1/sqrt(2)        (K(0) = 1/2, min profile 0)
  // The triangular and exponential constants are derived here with the same
  // calculation; they are not quoted from elsewhere.
  std::optional<double> rkhs_sensitivity_coeff;
};

const KernelSpec& GetKernel(KernelName name);
absl::StatusOr<KernelSpec> KernelFromString(absl::string_view name);
absl::string_view KernelToString(KernelName name);

// K(u) in density normalization. Rejects non-finite u.
absl::StatusOr<double> EvalKernel(const KernelSpec& spec, double u);

// Unchecked K(u); the hot path for estimators and simulations.
double KernelValue(KernelName name, double u);

// K_h(u) = K(u / h) / h.
inline double ScaledKernelValue(KernelName name, double u, double h) {
  return KernelValue(name, u / h) / h;
}

// K(u) / K(0). For positive definite kernels this is the covariance function
// of the masking process; for the others it is the shape used for
// positive-definiteness witnesses.
double KernelProfile(KernelName name, double u);

// 2 ||K||_inf / h: sensitivity of the scalar release K_h(X - t).
absl::StatusOr<double> PointwiseSensitivity(const KernelSpec& spec, double h);

// Delta' = rkhs_sensitivity_coeff / h.
absl::StatusOr<double> RkhsSensitivity(const KernelSpec& spec, double h);

// sum_ij a_i a_j profile(x_i - x_j). A negative value certifies that the
// kernel is not positive definite.
absl::StatusOr<double> CertifyPositiveDefinite(const KernelSpec& spec,
                                               absl::Span<const double> points,
                                               absl::Span<const double> coeffs);

struct PdWitness {
  std::vector<double> points;
  std::vector<double> coeffs;
};

// Known witness of non-positive-definiteness (rectangular, epanechnikov,
// biweight); nullopt for positive definite kernels.
std::optional<PdWitness> NonPositiveDefiniteWitness(KernelName name);

// Half-width of the support in units of u, infinity for sinc/gaussian/
// exponential.
double KernelSupportRadius(KernelName name);

// Points in u where K is not smooth (support edges, the cusp of the
// triangular and exponential kernels).
std::vector<double> KernelKinks(KernelName name);

// u minimizing K(u) over u >= 0 (the far tail for kernels that decay to 0).
// Used to construct worst-case input pairs.
double KernelArgMin(KernelName name);

}  // namespace ldpkde

#endif  // LDPKDE_KERNELS_H_
