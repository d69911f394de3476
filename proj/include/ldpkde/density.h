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

#ifndef LDPKDE_DENSITY_H_
#define LDPKDE_DENSITY_H_

#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldpkde/kernels.h"
#include "ldpkde/random.h"

namespace ldpkde {

enum class DensityName {
  kGaussianStd,
  kLaplaceDensity,
  kGaussianMixture,
  kUniform01,
};

// A test density with known smoothness, used by the simulation harness.
//
//   gaussian_std      N(0, 1); Sobolev smoothness s = infinity.
//   laplace_density   exp(-|x|)/2; Fourier transform 1/(1 + w^2), so it lies
//                     in S(s, L) for every s < 3/2.
//   gaussian_mixture  0.5 N(-1, 0.5^2) + 0.5 N(1, 0.5^2); s = infinity.
//   uniform01         1 on [0, 1]; only s < 1/2, outside the rate classes.
class Density {
 public:
  static Density Get(DensityName name);
  static absl::StatusOr<Density> FromString(absl::string_view name);

  DensityName name() const { return name_; }
  absl::string_view label() const;
  double Pdf(double x) const;
  double Sample(RandomStream& rng) const;
  double sup_norm() const { return sup_norm_; }
  // Sobolev exponent; the supremum of admissible s for laplace_density.
  double sobolev_s() const { return sobolev_s_; }
  // Points where the pdf is not smooth.
  const std::vector<double>& kinks() const { return kinks_; }
  // Interval outside of which at most `mass` probability lies (symmetric
  // about the bulk); finite.
  void Window(double mass, double* lo, double* hi) const;

 private:
  explicit Density(DensityName name);

  DensityName name_;
  double sup_norm_;
  double sobolev_s_;
  std::vector<double> kinks_;
};

// f_h(t) = int K_h(u - t) f(u) du by adaptive quadrature (absolute tolerance
// 1e-8).
//
// For the sinc kernel the integrand oscillates with period 2h and decays only
// like 1/|u - t|, so the integral is split at every zero t + k h of the kernel
// over a window carrying all but 1e-13 of the probability mass. Outside the
// window |K_h(u - t)| <= 1/(pi |u - t|) <= 1/(pi W), so the truncation error
// is below 1e-13 / (pi W).
absl::StatusOr<double> SmoothedTarget(const Density& density,
                                      const KernelSpec& spec, double h,
                                      double t);

}  // namespace ldpkde

#endif  // LDPKDE_DENSITY_H_
