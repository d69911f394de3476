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

#include "ldpkde/audit.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "Eigen/Cholesky"
#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ldpkde/gp_sampler.h"
#include "ldpkde/random.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

absl::StatusOr<std::vector<double>> LaplaceSamples(const AuditConfig& c,
                                                   const KernelSpec& spec,
                                                   double x, double scale,
                                                   RandomStream rng) {
  const double mean = ScaledKernelValue(spec.name, x - c.t, c.h);
  std::vector<double> out(c.samples);
  for (double& v : out) v = mean + scale * rng.StandardLaplace();
  return out;
}

// Sweeps every threshold and keeps the largest P(A|first) - e^a P(A|second).
void Sweep(const std::vector<double>& first, const std::vector<double>& second,
           double alpha, const char* label, AuditResult* best) {
  const double n1 = static_cast<double>(first.size());
  const double n2 = static_cast<double>(second.size());
  const double ea = std::exp(alpha);
  auto consider = [&](double p1, double p2, const std::string& event) {
    const double diff = p1 - ea * p2;
    if (diff > best->estimate) {
      best->estimate = diff;
      best->p_x = p1;
      best->p_x_prime = p2;
      best->standard_error =
          std::sqrt(p1 * (1.0 - p1) / n1 + ea * ea * p2 * (1.0 - p2) / n2);
      best->event = event;
    }
  };
  size_t i = 0, j = 0;
  while (i < first.size() || j < second.size()) {
    double tau;
    if (j >= second.size() || (i < first.size() && first[i] <= second[j])) {
      tau = first[i];
    } else {
      tau = second[j];
    }
    while (i < first.size() && first[i] <= tau) ++i;
    while (j < second.size() && second[j] <= tau) ++j;
    const double le1 = static_cast<double>(i) / n1;
    const double le2 = static_cast<double>(j) / n2;
    if (le1 - ea * le2 > best->estimate) {
      consider(le1, le2, absl::StrFormat("%s: T <= %.17g", label, tau));
    }
    if ((1.0 - le1) - ea * (1.0 - le2) > best->estimate) {
      consider(1.0 - le1, 1.0 - le2,
               absl::StrFormat("%s: T > %.17g", label, tau));
    }
  }
}

}  // namespace

std::pair<double, double> AdversarialPair(KernelName kernel, double h,
                                          double t) {
  return {t, t + KernelArgMin(kernel) * h};
}

absl::StatusOr<AuditResult> AuditPrivacy(const AuditConfig& c) {
  if (c.samples < 1) {
    return absl::InvalidArgumentError("invalid-input: samples must be >= 1");
  }
  if (!(c.h > 0.0) || !(c.scale_factor > 0.0) || !std::isfinite(c.x) ||
      !std::isfinite(c.x_prime) || !std::isfinite(c.t)) {
    return absl::InvalidArgumentError(
        "invalid-input: audit needs h > 0, scale_factor > 0 and finite points");
  }
  const KernelSpec& spec = GetKernel(c.kernel);
  const RandomStream base(c.seed);
  AuditResult result;
  std::vector<double> a, b;
  if (c.mechanism == Mechanism::kLaplace) {
    LDPKDE_ASSIGN_OR_RETURN(NoiseScale ns,
                            CalibrateLaplace(spec, c.h, c.budget));
    result.noise_scale = ns.scale * c.scale_factor;
    LDPKDE_ASSIGN_OR_RETURN(
        a, LaplaceSamples(c, spec, c.x, result.noise_scale, base.Split(0)));
    LDPKDE_ASSIGN_OR_RETURN(b, LaplaceSamples(c, spec, c.x_prime,
                                              result.noise_scale,
                                              base.Split(1)));
  } else {
    std::vector<double> points = {std::min(c.x, c.x_prime)};
    if (c.x != c.x_prime) points.push_back(std::max(c.x, c.x_prime));
    LDPKDE_ASSIGN_OR_RETURN(
        CurveReleaser releaser,
        CurveReleaser::Create(spec, points, c.h, c.budget, c.scale_factor));
    result.noise_scale = releaser.sigma();
    const int m = static_cast<int>(points.size());
    Eigen::VectorXd delta(m);
    for (int i = 0; i < m; ++i) {
      delta(i) = ScaledKernelValue(spec.name, c.x - points[i], c.h) -
                 ScaledKernelValue(spec.name, c.x_prime - points[i], c.h);
    }
    Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
    if (delta.norm() > 0.0) {
      const Eigen::MatrixXd& l = releaser.gram().cholesky_factor();
      w = l.transpose().triangularView<Eigen::Upper>().solve(
          l.triangularView<Eigen::Lower>().solve(delta));
    }
    auto draw = [&](double x, RandomStream rng) {
      std::vector<double> out(c.samples);
      std::vector<double> z(m);
      for (double& v : out) {
        releaser.ReleaseInto(x, rng, absl::MakeSpan(z));
        v = 0.0;
        for (int i = 0; i < m; ++i) v += w(i) * z[i];
      }
      return out;
    };
    a = draw(c.x, base.Split(0));
    b = draw(c.x_prime, base.Split(1));
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double alpha = c.budget.alpha_eff();
  Sweep(a, b, alpha, "x vs x'", &result);
  AuditResult swapped;
  Sweep(b, a, alpha, "x' vs x", &swapped);
  if (swapped.estimate > result.estimate) {
    swapped.noise_scale = result.noise_scale;
    result = swapped;
  }
  result.threshold = c.budget.beta_eff() + 5.0 * result.standard_error;
  result.pass = result.estimate <= result.threshold;
  if (result.event.empty()) result.event = "empty";
  return result;
}

}  // namespace ldpkde
