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

#ifndef LDPKDE_SIMULATE_H_
#define LDPKDE_SIMULATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "ldpkde/density.h"
#include "ldpkde/kernels.h"
#include "ldpkde/privacy.h"

namespace ldpkde {

enum class RuleKind { kFixed, kOracle, kAdaptive };

struct BandwidthRule {
  RuleKind kind = RuleKind::kFixed;
  // Only for kFixed.
  double h = 0.0;

  static BandwidthRule Fixed(double h) { return {RuleKind::kFixed, h}; }
  static BandwidthRule Oracle() { return {RuleKind::kOracle, 0.0}; }
  static BandwidthRule Adaptive() { return {RuleKind::kAdaptive, 0.0}; }
};

// "fixed", "oracle" or "adaptive".
absl::string_view RuleLabel(RuleKind kind);

struct MseConfig {
  DensityName density = DensityName::kGaussianStd;
  KernelName kernel = KernelName::kSinc;
  // nullopt turns the privacy noise off.
  std::optional<Mechanism> mechanism = Mechanism::kLaplace;
  // Budget of one owner. A fixed rule releases once with it; the grid rules
  // release at every grid bandwidth and split it evenly over them.
  PrivacyBudget budget = *PrivacyBudget::Create(1.0, 0.0);
  int64_t n = 1000;
  std::vector<BandwidthRule> rules = {BandwidthRule::Adaptive()};
  double t = 0.0;
  int64_t replications = 500;
  uint64_t seed = 1;
  // Lepski parameters for the grid rules.
  double kappa = 2.0;
  double a = 2.0;
  double h_max = 1.0;
  // Bound on ||f||_inf; 0 means the density's own sup norm.
  double M = 0.0;
  // Worker threads; <= 0 means all available cores. Results do not depend on
  // this.
  int jobs = 1;
};

struct MseRow {
  int64_t n = 0;
  RuleKind rule = RuleKind::kFixed;
  // The bandwidth used; for the adaptive rule the mean selected bandwidth.
  double h = 0.0;
  double mse = 0.0;
  // Standard error of the MSE estimate.
  double mc_se = 0.0;
  int64_t reps = 0;
  double mean = 0.0;
  // Unbiased sample variance of the estimates.
  double variance = 0.0;
  // f(t).
  double target = 0.0;
  // f_h(t) for the fixed and oracle rules; NaN for the adaptive rule.
  double smoothed_target = 0.0;
  // v^2(h) and lambda(h) for the fixed and oracle rules (lambda = 1 for a
  // fixed rule).
  double v_sq = 0.0;
  double lambda = 1.0;
  // Oracle rule only: whether no grid bandwidth qualified, in which case the
  // smallest grid bandwidth is used.
  bool oracle_fallback = false;
  // Adaptive rule only: how often each grid exponent j was selected.
  std::vector<int64_t> selection_counts;
};

// Monte Carlo MSE of f_hat(t) for each rule. Replication r draws from
// RandomStream::Derive(seed, r): the sample X_1..X_n comes from Split(0) and
// is shared by all rules, the grid releases (shared by the oracle and adaptive
// rules) from Split(1), and fixed rule k from Split(2 + k).
absl::StatusOr<std::vector<MseRow>> RunMse(const MseConfig& config);

struct RateFit {
  double slope;
  double slope_se;
  double intercept;
};

// Least squares of log mse on log n. Needs at least 4 distinct n.
absl::StatusOr<RateFit> FitRate(absl::Span<const MseRow> rows);

}  // namespace ldpkde

#endif  // LDPKDE_SIMULATE_H_
