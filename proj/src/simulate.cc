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

#include "ldpkde/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ldpkde/gp_sampler.h"
#include "ldpkde/lepski.h"
#include "ldpkde/parallel.h"
#include "ldpkde/random.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

// One owner's release at the single point t, for a given bandwidth.
class PointReleaser {
 public:
  static absl::StatusOr<PointReleaser> Create(
      const KernelSpec& spec, std::optional<Mechanism> mechanism, double h,
      double t, const PrivacyBudget& budget) {
    PointReleaser r;
    r.kernel_ = spec.name;
    r.h_ = h;
    r.t_ = t;
    r.mechanism_ = mechanism;
    if (mechanism == Mechanism::kLaplace) {
      LDPKDE_ASSIGN_OR_RETURN(auto laplace,
                              LaplaceReleaser::Create(spec, h, budget));
      r.laplace_.emplace(std::move(laplace));
    } else if (mechanism == Mechanism::kGaussianProcess) {
      const double point[] = {t};
      LDPKDE_ASSIGN_OR_RETURN(auto curve,
                              CurveReleaser::Create(spec, point, h, budget));
      r.curve_.emplace(std::move(curve));
    }
    return r;
  }

  double Release(double x, RandomStream& rng) const {
    if (laplace_) {
      return laplace_->Release(ScaledKernelValue(kernel_, x - t_, h_), rng);
    }
    if (curve_) {
      double out = 0.0;
      curve_->ReleaseInto(x, rng, absl::MakeSpan(&out, 1));
      return out;
    }
    return ScaledKernelValue(kernel_, x - t_, h_);
  }

 private:
  PointReleaser() = default;

  KernelName kernel_ = KernelName::kSinc;
  double h_ = 1.0;
  double t_ = 0.0;
  std::optional<Mechanism> mechanism_;
  std::optional<LaplaceReleaser> laplace_;
  std::optional<CurveReleaser> curve_;
};

// Mean of one release per owner, summed in owner order.
double Mean(const std::vector<double>& x, const PointReleaser& releaser,
            RandomStream& rng) {
  double sum = 0.0;
  for (double xi : x) sum += releaser.Release(xi, rng);
  return sum / static_cast<double>(x.size());
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  double mc_se = 0.0;
};

Moments Summarize(const std::vector<double>& estimates, double target) {
  const double reps = static_cast<double>(estimates.size());
  Moments m;
  double sq_sum = 0.0;
  for (double e : estimates) {
    m.mean += e;
    const double err = e - target;
    sq_sum += err * err;
  }
  m.mean /= reps;
  m.mse = sq_sum / reps;
  double var_sum = 0.0;
  double se_sum = 0.0;
  for (double e : estimates) {
    var_sum += (e - m.mean) * (e - m.mean);
    const double err = e - target;
    se_sum += (err * err - m.mse) * (err * err - m.mse);
  }
  m.variance = var_sum / (reps - 1.0);
  m.mc_se = std::sqrt(se_sum / (reps - 1.0) / reps);
  return m;
}

}  // namespace

absl::string_view RuleLabel(RuleKind kind) {
  switch (kind) {
    case RuleKind::kFixed:
      return "fixed";
    case RuleKind::kOracle:
      return "oracle";
    case RuleKind::kAdaptive:
      return "adaptive";
  }
  return "fixed";
}

absl::StatusOr<std::vector<MseRow>> RunMse(const MseConfig& config) {
  if (config.replications < 100) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid-input: replications = %d, need at least 100",
        config.replications));
  }
  if (config.n < 1) {
    return absl::InvalidArgumentError("invalid-input: n must be positive");
  }
  if (config.rules.empty()) {
    return absl::InvalidArgumentError("invalid-input: no bandwidth rule");
  }
  const Density density = Density::Get(config.density);
  const KernelSpec& spec = GetKernel(config.kernel);
  const double M = config.M > 0.0 ? config.M : density.sup_norm();
  const double target = density.Pdf(config.t);
  const int64_t reps = config.replications;

  // Fixed rules.
  std::vector<double> fixed_h;
  std::vector<PointReleaser> fixed_releasers;
  bool need_grid = false;
  for (const BandwidthRule& rule : config.rules) {
    if (rule.kind != RuleKind::kFixed) {
      need_grid = true;
      continue;
    }
    if (!(rule.h > 0.0) || !std::isfinite(rule.h)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "invalid-input: fixed bandwidth %g must be positive", rule.h));
    }
    LDPKDE_ASSIGN_OR_RETURN(
        auto releaser, PointReleaser::Create(spec, config.mechanism, rule.h,
                                             config.t, config.budget));
    fixed_h.push_back(rule.h);
    fixed_releasers.push_back(std::move(releaser));
  }

  // Grid rules: Lepski configuration, psi table and the oracle choice are
  // data independent and computed once.
  std::optional<BandwidthGrid> grid;
  LepskiConfig cfg;
  std::vector<PointReleaser> grid_releasers;
  std::vector<std::vector<double>> psi;
  OracleSelection oracle;
  int oracle_index = 0;
  if (need_grid) {
    LDPKDE_ASSIGN_OR_RETURN(grid,
                            BandwidthGrid::Build(config.n, config.a,
                                                 config.h_max));
    LDPKDE_ASSIGN_OR_RETURN(
        cfg, MakeLepskiConfig(config.kappa, M, spec,
                              config.mechanism.value_or(Mechanism::kLaplace),
                              config.budget, config.t, *grid));
    if (!config.mechanism.has_value()) cfg.noise_coefficient = 0.0;
    const int m = grid->size();
    psi.assign(m, std::vector<double>(m, 0.0));
    for (int j = 0; j < m; ++j) {
      LDPKDE_ASSIGN_OR_RETURN(
          auto releaser,
          PointReleaser::Create(spec, config.mechanism, grid->bandwidth(j),
                                config.t, cfg.budget));
      grid_releasers.push_back(std::move(releaser));
      for (int k = j; k < m; ++k) {
        LDPKDE_ASSIGN_OR_RETURN(psi[j][k], Psi(cfg, config.n, *grid, j, k));
      }
    }
    LDPKDE_ASSIGN_OR_RETURN(oracle,
                            SelectOracle(density, cfg, config.n, *grid));
    oracle_index = oracle.index >= 0 ? oracle.index : m - 1;
  }

  const int num_fixed = static_cast<int>(fixed_releasers.size());
  std::vector<std::vector<double>> fixed_est(num_fixed,
                                             std::vector<double>(reps));
  std::vector<double> oracle_est(need_grid ? reps : 0);
  std::vector<double> adaptive_est(need_grid ? reps : 0);
  std::vector<int> adaptive_index(need_grid ? reps : 0);

  ParallelFor(reps, config.jobs, [&](int64_t r) {
    const RandomStream base =
        RandomStream::Derive(config.seed, static_cast<uint64_t>(r));
    RandomStream data_rng = base.Split(0);
    std::vector<double> x(config.n);
    for (double& xi : x) xi = density.Sample(data_rng);
    if (need_grid) {
      RandomStream grid_rng = base.Split(1);
      std::vector<double> estimates(grid->size());
      for (int j = 0; j < grid->size(); ++j) {
        estimates[j] = Mean(x, grid_releasers[j], grid_rng);
      }
      const LepskiSelection sel = SelectFromEstimates(
          estimates, grid->bandwidths(),
          [&psi](int j, int k) { return psi[j][k]; });
      oracle_est[r] = estimates[oracle_index];
      adaptive_est[r] = estimates[sel.index];
      adaptive_index[r] = sel.index;
    }
    for (int k = 0; k < num_fixed; ++k) {
      RandomStream rng = base.Split(2 + static_cast<uint64_t>(k));
      fixed_est[k][r] = Mean(x, fixed_releasers[k], rng);
    }
  });

  std::vector<MseRow> rows;
  int fixed_k = 0;
  for (const BandwidthRule& rule : config.rules) {
    MseRow row;
    row.n = config.n;
    row.rule = rule.kind;
    row.reps = reps;
    row.target = target;
    const std::vector<double>* estimates = nullptr;
    double h = 0.0;
    switch (rule.kind) {
      case RuleKind::kFixed: {
        h = fixed_h[fixed_k];
        estimates = &fixed_est[fixed_k];
        ++fixed_k;
        double c = 0.0;
        if (config.mechanism.has_value()) {
          LDPKDE_ASSIGN_OR_RETURN(
              c, NoiseCoefficient(spec, config.budget, *config.mechanism));
        }
        row.v_sq = VarianceBoundWithCoefficient(M, spec.l2_norm_sq, c,
                                                config.n, h);
        row.lambda = 1.0;
        break;
      }
      case RuleKind::kOracle:
        h = grid->bandwidth(oracle_index);
        estimates = &oracle_est;
        row.oracle_fallback = oracle.index < 0;
        row.v_sq = VSquared(cfg, config.n, h);
        row.lambda = Lambda(cfg, *grid, oracle_index);
        break;
      case RuleKind::kAdaptive: {
        estimates = &adaptive_est;
        row.selection_counts.assign(grid->size(), 0);
        double h_sum = 0.0;
        for (int idx : adaptive_index) {
          ++row.selection_counts[idx];
          h_sum += grid->bandwidth(idx);
        }
        h = h_sum / static_cast<double>(reps);
        row.v_sq = std::numeric_limits<double>::quiet_NaN();
        row.lambda = std::numeric_limits<double>::quiet_NaN();
        break;
      }
    }
    row.h = h;
    if (rule.kind == RuleKind::kAdaptive) {
      row.smoothed_target = std::numeric_limits<double>::quiet_NaN();
    } else {
      LDPKDE_ASSIGN_OR_RETURN(row.smoothed_target,
                              SmoothedTarget(density, spec, h, config.t));
    }
    const Moments m = Summarize(*estimates, target);
    row.mse = m.mse;
    row.mc_se = m.mc_se;
    row.mean = m.mean;
    row.variance = m.variance;
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::StatusOr<RateFit> FitRate(absl::Span<const MseRow> rows) {
  std::vector<int64_t> ns;
  for (const MseRow& r : rows) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  const auto distinct = std::unique(ns.begin(), ns.end()) - ns.begin();
  if (distinct < 4) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid-input: rate fit needs at least 4 distinct n, got %d",
        distinct));
  }
  const double k = static_cast<double>(rows.size());
  double mx = 0.0, my = 0.0;
  for (const MseRow& r : rows) {
    if (!(r.mse > 0.0)) {
      return absl::InvalidArgumentError(
          "invalid-input: rate fit needs positive mse values");
    }
    mx += std::log(static_cast<double>(r.n));
    my += std::log(r.mse);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const MseRow& r : rows) {
    const double dx = std::log(static_cast<double>(r.n)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(r.mse) - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (const MseRow& r : rows) {
    const double res = std::log(r.mse) - fit.intercept -
                       fit.slope * std::log(static_cast<double>(r.n));
    rss += res * res;
  }
  fit.slope_se = rows.size() > 2 ? std::sqrt(rss / (k - 2.0) / sxx) : 0.0;
  return fit;
}

}  // namespace ldpkde
