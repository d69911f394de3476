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

#ifndef LDPKDE_AUDIT_H_
#define LDPKDE_AUDIT_H_

#include <cstdint>
#include <string>
#include <utility>

#include "absl/status/statusor.h"
#include "ldpkde/kernels.h"
#include "ldpkde/privacy.h"

namespace ldpkde {

struct AuditConfig {
  Mechanism mechanism = Mechanism::kLaplace;
  KernelName kernel = KernelName::kSinc;
  double h = 0.5;
  PrivacyBudget budget = *PrivacyBudget::Create(1.0, 0.0);
  // The neighbouring pair of single observations.
  double x = 0.0;
  double x_prime = 0.0;
  // Evaluation point of the Laplace release; ignored for the GP, which is
  // released on the grid {x, x_prime}.
  double t = 0.0;
  int64_t samples = 1000000;
  uint64_t seed = 1;
  // Multiplies the calibrated noise scale; 0.5 gives the negative control.
  double scale_factor = 1.0;
};

struct AuditResult {
  // sup over threshold events A of P_hat(A | x) - e^alpha P_hat(A | x'),
  // including the empty event, so never negative.
  double estimate = 0.0;
  // Binomial standard error of the difference at the maximizing event.
  double standard_error = 0.0;
  // beta + 5 standard errors.
  double threshold = 0.0;
  bool pass = true;
  // The maximizing event, e.g. "T > 0.41" or "T <= -1.2" with the roles of x
  // and x' noted.
  std::string event;
  double p_x = 0.0;
  double p_x_prime = 0.0;
  double noise_scale = 0.0;
};

// Empirical check of the (alpha, beta) inequality for one release. The
// Laplace release is the scalar K_h(X - t) + noise. The GP release is the
// curve on {x, x'}, reduced to the likelihood-ratio statistic
// T = <Z, Sigma^-1 delta>, delta the difference of the two means; for a
// Gaussian pair every likelihood-ratio event is a threshold event on T.
// Thresholds run over every sample value, in both tails and both orderings
// of the pair.
absl::StatusOr<AuditResult> AuditPrivacy(const AuditConfig& config);

// A pair (x, x') maximizing |K_h(x - t) - K_h(x' - t)|: x = t and x' where
// K attains its minimum (or is negligible, for kernels with K >= 0).
std::pair<double, double> AdversarialPair(KernelName kernel, double h,
                                          double t);

}  // namespace ldpkde

#endif  // LDPKDE_AUDIT_H_
