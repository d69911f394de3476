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

#include "ldpkde/lepski.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ldpkde/quadrature.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

double LowerBandwidth(int64_t n, double h_max) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  return std::max(std::log(h_max * sqrt_n), 1.0) / sqrt_n;
}

}  // namespace

absl::StatusOr<BandwidthGrid> BandwidthGrid::Build(int64_t n, double a,
                                                   double h_max) {
  if (n < 3) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid-grid: n = %d must be at least 3", n));
  }
  if (!std::isfinite(a) || a <= 1.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid-grid: a = %g must exceed 1", a));
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  if (!std::isfinite(h_max) || h_max <= 0.0 || h_max > 1.0 ||
      a * std::log(h_max * sqrt_n) / sqrt_n > h_max) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid-grid: need a log(h_max sqrt(n)) / sqrt(n) <= h_max <= 1, got "
        "a = %g, n = %d, h_max = %g",
        a, n, h_max));
  }
  BandwidthGrid grid;
  grid.n_ = n;
  grid.a_ = a;
  grid.h_max_ = h_max;
  grid.h_min_ = LowerBandwidth(n, h_max);
  if (h_max < grid.h_min_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid-grid: h_max = %g is below h_min = max(log(h_max sqrt(n)), "
        "1) / sqrt(n) = %g, so the grid is empty",
        h_max, grid.h_min_));
  }
  // Number of exponents with a^-j h_max >= h_min, decided in log space with a
  // small allowance so that exact powers are kept.
  const double span = std::log(h_max / grid.h_min_) / std::log(a);
  const int j_max = static_cast<int>(std::floor(span + 1e-12));
  for (int j = 0; j <= j_max; ++j) {
    grid.bandwidths_.push_back(h_max * std::pow(a, -j));
  }
  return grid;
}

double BandwidthGrid::LogRatio(int j) const {
  return static_cast<double>(j) * std::log(a_);
}

std::optional<int> BandwidthGrid::IndexOf(double h) const {
  if (!(h > 0.0)) return std::nullopt;
  const int j =
      static_cast<int>(std::lround(std::log(h_max_ / h) / std::log(a_)));
  if (j < 0 || j >= size()) return std::nullopt;
  if (std::abs(bandwidths_[j] - h) > 1e-9 * bandwidths_[j]) {
    return std::nullopt;
  }
  return j;
}

absl::StatusOr<LepskiConfig> MakeLepskiConfig(double kappa, double M,
                                              const KernelSpec& kernel,
                                              Mechanism mechanism,
                                              const PrivacyBudget& budget,
                                              double t,
                                              const BandwidthGrid& grid) {
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid-input: kappa = %g must be positive", kappa));
  }
  if (!std::isfinite(M) || M <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid-input: M = %g must be positive", M));
  }
  if (!std::isfinite(t)) {
    return absl::InvalidArgumentError("invalid-input: t must be finite");
  }
  LepskiConfig cfg;
  cfg.kappa = kappa;
  cfg.M = M;
  cfg.kernel = kernel;
  cfg.mechanism = mechanism;
  cfg.t = t;
  LDPKDE_ASSIGN_OR_RETURN(cfg.budget, Compose(budget, grid.size()));
  LDPKDE_ASSIGN_OR_RETURN(cfg.noise_coefficient,
                          NoiseCoefficient(kernel, cfg.budget, mechanism));
  return cfg;
}

double TheoreticalKappa(const LepskiConfig& cfg) {
  const double floor = cfg.mechanism == Mechanism::kLaplace ? 256.0 : 32.0;
  if (cfg.noise_coefficient <= 0.0) return floor;
  return std::max(floor, 128.0 * cfg.kernel.sup_norm / cfg.noise_coefficient);
}

absl::StatusOr<double> KernelDifferenceL2Sq(const KernelSpec& spec, double h,
                                            double eta) {
  if (!(h > 0.0) || !(eta > 0.0) || !std::isfinite(h) ||
      !std::isfinite(eta)) {
    return absl::InvalidArgumentError(
        "invalid-input: bandwidths must be positive and finite");
  }
  if (h == eta) return 0.0;
  if (spec.name == KernelName::kSinc) {
    return std::abs(1.0 / eta - 1.0 / h);
  }
  const double big = std::max(h, eta);
  const double small = std::min(h, eta);
  const KernelName name = spec.name;
  auto f = [name, h, eta](double u) {
    const double d = ScaledKernelValue(name, u, h) -
                     ScaledKernelValue(name, u, eta);
    return d * d;
  };
  double radius = KernelSupportRadius(name);
  if (!std::isfinite(radius)) {
    radius = name == KernelName::kGaussian ? 40.0 : 60.0;
  }
  std::vector<double> cuts;
  for (double k : KernelKinks(name)) {
    cuts.push_back(k * h);
    cuts.push_back(k * eta);
  }
  // Resolve the narrow peak before the wide tail.
  for (double s : {1.0, 4.0, 16.0}) {
    cuts.push_back(s * small);
    cuts.push_back(-s * small);
    cuts.push_back(s * big);
    cuts.push_back(-s * big);
  }
  // Near-equal bandwidths cancel, so the error estimate bottoms out at
  // round-off of the individual terms; ask for no more than that.
  const double total_scale = spec.l2_norm_sq * (1.0 / h + 1.0 / eta);
  return IntegratePiecewise(f, -radius * big, radius * big, cuts,
                            1e-9 * total_scale);
}

double VSquared(const LepskiConfig& cfg, int64_t n, double h) {
  return VarianceBoundWithCoefficient(cfg.M, cfg.kernel.l2_norm_sq,
                                      cfg.noise_coefficient, n, h);
}

absl::StatusOr<double> VSquaredPair(const LepskiConfig& cfg, int64_t n,
                                    double h, double eta) {
  LDPKDE_ASSIGN_OR_RETURN(double d, KernelDifferenceL2Sq(cfg.kernel, h, eta));
  const double nn = static_cast<double>(n);
  const double c2 = cfg.noise_coefficient * cfg.noise_coefficient;
  return cfg.M * d / nn + c2 / (nn * h * h) + c2 / (nn * eta * eta);
}

double Lambda(const LepskiConfig& cfg, const BandwidthGrid& grid, int j) {
  return std::max(1.0, std::sqrt(cfg.kappa * grid.LogRatio(j)));
}

absl::StatusOr<double> Psi(const LepskiConfig& cfg, int64_t n,
                           const BandwidthGrid& grid, int j, int k) {
  if (j < 0 || k < j || k >= grid.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid-input: need 0 <= j <= k < %d, got j = %d, k = %d",
        grid.size(), j, k));
  }
  const double h = grid.bandwidth(j);
  const double eta = grid.bandwidth(k);
  LDPKDE_ASSIGN_OR_RETURN(double pair, VSquaredPair(cfg, n, h, eta));
  return std::sqrt(VSquared(cfg, n, h)) * Lambda(cfg, grid, j) +
         std::sqrt(pair) * Lambda(cfg, grid, k);
}

LepskiSelection SelectFromEstimates(
    absl::Span<const double> estimates, absl::Span<const double> bandwidths,
    const std::function<double(int, int)>& psi) {
  LepskiSelection out;
  const int m = static_cast<int>(estimates.size());
  out.estimates.assign(estimates.begin(), estimates.end());
  out.admissible.assign(m, true);
  out.index = m - 1;
  for (int j = 0; j < m; ++j) {
    for (int k = j; k < m; ++k) {
      LepskiComparison c;
      c.h_index = j;
      c.eta_index = k;
      c.h = bandwidths[j];
      c.eta = bandwidths[k];
      c.abs_diff = std::abs(estimates[j] - estimates[k]);
      c.psi = psi(j, k);
      c.ok = c.abs_diff <= c.psi;
      if (!c.ok) out.admissible[j] = false;
      out.trace.push_back(c);
    }
  }
  for (int j = 0; j < m; ++j) {
    if (out.admissible[j]) {
      out.index = j;
      break;
    }
  }
  out.h = m > 0 ? bandwidths[out.index] : 0.0;
  return out;
}

absl::StatusOr<LepskiSelection> SelectAdaptive(const PrivateDataset& dataset,
                                               const LepskiConfig& cfg,
                                               const BandwidthGrid& grid) {
  if (dataset.n() != grid.n()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid-input: dataset has %d owners but the grid was built for %d",
        dataset.n(), grid.n()));
  }
  std::vector<double> estimates(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    LDPKDE_ASSIGN_OR_RETURN(estimates[j],
                            dataset.Aggregate(grid.bandwidth(j), cfg.t));
  }
  std::vector<std::vector<double>> psi(grid.size(),
                                       std::vector<double>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) {
    for (int k = j; k < grid.size(); ++k) {
      LDPKDE_ASSIGN_OR_RETURN(psi[j][k], Psi(cfg, grid.n(), grid, j, k));
    }
  }
  return SelectFromEstimates(estimates, grid.bandwidths(),
                             [&psi](int j, int k) { return psi[j][k]; });
}

OracleSelection SelectOracleFromBiases(absl::Span<const double> biases,
                                       absl::Span<const double> thresholds,
                                       const BandwidthGrid& grid) {
  OracleSelection out;
  out.biases.assign(biases.begin(), biases.end());
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  const int m = static_cast<int>(biases.size());
  // suffix_max[j] = max_{k >= j} |bias_k|, i.e. over all eta <= h_j.
  std::vector<double> suffix_max(m + 1, 0.0);
  for (int j = m - 1; j >= 0; --j) {
    suffix_max[j] = std::max(suffix_max[j + 1], std::abs(biases[j]));
  }
  for (int j = 0; j < m; ++j) {
    if (suffix_max[j] <= thresholds[j]) {
      out.index = j;
      out.h = grid.bandwidth(j);
      return out;
    }
  }
  out.index = -1;
  out.h = grid.h_min();
  return out;
}

absl::StatusOr<OracleSelection> SelectOracle(const Density& density,
                                             const LepskiConfig& cfg,
                                             int64_t n,
                                             const BandwidthGrid& grid) {
  const double f_t = density.Pdf(cfg.t);
  std::vector<double> biases(grid.size());
  std::vector<double> thresholds(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    LDPKDE_ASSIGN_OR_RETURN(
        double f_h, SmoothedTarget(density, cfg.kernel, grid.bandwidth(j),
                                   cfg.t));
    biases[j] = f_h - f_t;
    thresholds[j] = 0.5 * std::sqrt(VSquared(cfg, n, grid.bandwidth(j))) *
                    Lambda(cfg, grid, j);
  }
  return SelectOracleFromBiases(biases, thresholds, grid);
}

absl::StatusOr<RiskBound> OracleRiskBound(const Density& density,
                                          const LepskiConfig& cfg, int64_t n) {
  if (n < 3) {
    return absl::InvalidArgumentError("invalid-input: n must be at least 3");
  }
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);
  const double h_lo = LowerBandwidth(n, 1.0);
  const double f_t = density.Pdf(cfg.t);
  const double c2 = cfg.noise_coefficient * cfg.noise_coefficient;

  auto bias_sq = [&](double h) -> absl::StatusOr<double> {
    LDPKDE_ASSIGN_OR_RETURN(double f_h,
                            SmoothedTarget(density, cfg.kernel, h, cfg.t));
    return (f_h - f_t) * (f_h - f_t);
  };

  // Running sup of the squared bias over a log-spaced eta grid.
  constexpr int kEtaPoints = 384;
  const double eta_lo = h_lo / 64.0;
  std::vector<double> etas(kEtaPoints), running(kEtaPoints);
  double acc = 0.0;
  for (int i = 0; i < kEtaPoints; ++i) {
    etas[i] = eta_lo * std::pow(1.0 / eta_lo,
                                static_cast<double>(i) / (kEtaPoints - 1));
    LDPKDE_ASSIGN_OR_RETURN(double b2, bias_sq(etas[i]));
    acc = std::max(acc, b2);
    running[i] = acc;
  }
  auto objective = [&](double h) -> absl::StatusOr<double> {
    const auto it = std::upper_bound(etas.begin(), etas.end(), h);
    double sup = it == etas.begin() ? 0.0 : running[(it - etas.begin()) - 1];
    LDPKDE_ASSIGN_OR_RETURN(double b2, bias_sq(h));
    sup = std::max(sup, b2);
    return sup + cfg.M * cfg.kernel.l2_norm_sq * log_n / (nn * h) +
           c2 * log_n / (nn * h * h);
  };

  double lo = h_lo;
  double hi = 1.0;
  RiskBound best{std::numeric_limits<double>::infinity(), h_lo};
  constexpr int kPoints = 256;
  for (int round = 0; round < 6; ++round) {
    const double previous = best.value;
    std::vector<double> hs(kPoints);
    int best_i = 0;
    for (int i = 0; i < kPoints; ++i) {
      hs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
      LDPKDE_ASSIGN_OR_RETURN(double v, objective(hs[i]));
      if (v < best.value) {
        best = RiskBound{v, hs[i]};
      }
    }
    for (int i = 0; i < kPoints; ++i) {
      if (hs[i] == best.argmin_h) best_i = i;
    }
    if (round > 0 && previous - best.value <= 1e-4 * best.value) break;
    const double new_lo = hs[std::max(best_i - 1, 0)];
    const double new_hi = hs[std::min(best_i + 1, kPoints - 1)];
    if (!(new_hi > new_lo)) break;
    lo = new_lo;
    hi = new_hi;
  }
  return best;
}

}  // namespace ldpkde
