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

#ifndef LDPKDE_LEPSKI_H_
#define LDPKDE_LEPSKI_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "ldpkde/density.h"
#include "ldpkde/estimator.h"
#include "ldpkde/kernels.h"
#include "ldpkde/privacy.h"

namespace ldpkde {

// Geometric bandwidth grid {a^-j h_max : j >= 0} restricted to
// [h_min, h_max], with h_min = max(log(h_max sqrt(n)), 1) / sqrt(n).
// Bandwidths are addressed by their exponent j (index 0 is h_max); floating
// comparisons between bandwidths are never needed.
class BandwidthGrid {
 public:
  // Requires n >= 3, a > 1 and a log(h_max sqrt(n)) / sqrt(n) <= h_max <= 1.
  static absl::StatusOr<BandwidthGrid> Build(int64_t n, double a,
                                             double h_max);

  int64_t n() const { return n_; }
  double a() const { return a_; }
  double h_max() const { return h_max_; }
  double h_min() const { return h_min_; }
  int size() const { return static_cast<int>(bandwidths_.size()); }
  // a^-j h_max.
  double bandwidth(int j) const { return bandwidths_[j]; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }
  // log(h_max / h_j) = j log a.
  double LogRatio(int j) const;
  // Exponent j with bandwidth(j) within relative 1e-9 of h, if any.
  std::optional<int> IndexOf(double h) const;

 private:
  BandwidthGrid() = default;

  int64_t n_ = 0;
  double a_ = 0.0;
  double h_max_ = 0.0;
  double h_min_ = 0.0;
  std::vector<double> bandwidths_;
};

struct LepskiConfig {
  double kappa = 2.0;
  // Known bound on ||f||_inf.
  double M = 1.0;
  KernelSpec kernel = GetKernel(KernelName::kSinc);
  Mechanism mechanism = Mechanism::kLaplace;
  // Per-release budget, already composed over the grid.
  PrivacyBudget budget = *PrivacyBudget::Create(1.0, 0.0);
  double t = 0.0;
  // C_{alpha' beta'} at the composed budget; 0 means no privacy noise.
  double noise_coefficient = 0.0;
};

// Composes `budget` over grid.size() releases and calibrates the noise
// constant.
absl::StatusOr<LepskiConfig> MakeLepskiConfig(double kappa, double M,
                                              const KernelSpec& kernel,
                                              Mechanism mechanism,
                                              const PrivacyBudget& budget,
                                              double t,
                                              const BandwidthGrid& grid);

// Smallest kappa for which the adaptation proof goes through
// (kappa'/2 - 2 > 0 with kappa' = min(kappa/64, kappa C / (32 ||K||_inf)) for
// Laplace noise and min(kappa/8, kappa C / (32 ||K||_inf)) for the GP).
double TheoreticalKappa(const LepskiConfig& cfg);

// int (K_h(u) - K_eta(u))^2 du. Exact for sinc (the Fourier supports nest, so
// the value is |1/eta - 1/h|); adaptive quadrature otherwise.
absl::StatusOr<double> KernelDifferenceL2Sq(const KernelSpec& spec, double h,
                                            double eta);

// v^2(h) = M int K^2 / (n h) + C^2 / (n h^2).
double VSquared(const LepskiConfig& cfg, int64_t n, double h);
// v^2(h, eta) = (M/n) int (K_h - K_eta)^2 + C^2/(n h^2) + C^2/(n eta^2).
absl::StatusOr<double> VSquaredPair(const LepskiConfig& cfg, int64_t n,
                                    double h, double eta);
// lambda(h_j) = max(1, sqrt(kappa log(h_max / h_j))).
double Lambda(const LepskiConfig& cfg, const BandwidthGrid& grid, int j);
// psi(h_j, h_k) = v(h_j) lambda(h_j) + v(h_j, h_k) lambda(h_k), k >= j.
absl::StatusOr<double> Psi(const LepskiConfig& cfg, int64_t n,
                           const BandwidthGrid& grid, int j, int k);

struct LepskiComparison {
  int h_index;
  int eta_index;
  double h;
  double eta;
  double abs_diff;
  double psi;
  bool ok;
};

struct LepskiSelection {
  // Grid exponent of the selected bandwidth.
  int index = 0;
  double h = 0.0;
  // f_hat_{h_j}(t) by grid index.
  std::vector<double> estimates;
  // Whether h_j passes every comparison with smaller bandwidths.
  std::vector<bool> admissible;
  // Every (h, eta <= h) comparison, row-major in j then k.
  std::vector<LepskiComparison> trace;
};

// The selection rule on precomputed estimates (index j = bandwidth a^-j
// h_max): the smallest j with |est_j - est_k| <= psi(j, k) for all k >= j.
// The last index always qualifies, so the result is well defined.
LepskiSelection SelectFromEstimates(
    absl::Span<const double> estimates, absl::Span<const double> bandwidths,
    const std::function<double(int, int)>& psi);

// h_hat_n from a dataset holding releases at every grid bandwidth.
absl::StatusOr<LepskiSelection> SelectAdaptive(const PrivateDataset& dataset,
                                               const LepskiConfig& cfg,
                                               const BandwidthGrid& grid);

struct OracleSelection {
  // Grid exponent, or -1 when no grid bandwidth qualifies.
  int index = -1;
  // Selected bandwidth; h_min when index == -1.
  double h = 0.0;
  // f_{h_j}(t) - f(t) by grid index.
  std::vector<double> biases;
  // v(h_j) lambda(h_j) / 2 by grid index.
  std::vector<double> thresholds;
};

// The rule on precomputed biases and thresholds.
OracleSelection SelectOracleFromBiases(absl::Span<const double> biases,
                                       absl::Span<const double> thresholds,
                                       const BandwidthGrid& grid);

// h*_n: the largest h with |f_eta(t) - f(t)| <= v(h) lambda(h) / 2 for every
// grid eta <= h. Biases come from SmoothedTarget.
absl::StatusOr<OracleSelection> SelectOracle(const Density& density,
                                             const LepskiConfig& cfg,
                                             int64_t n,
                                             const BandwidthGrid& grid);

struct RiskBound {
  double value;
  double argmin_h;
};

// r_n(t, f) = inf over h in [h_min, 1] of
//   sup_{eta <= h} (f_eta(t) - f(t))^2 + M int K^2 log n / (n h)
//   + C^2 log n / (n h^2),
// with h_min = max(log sqrt(n), 1) / sqrt(n). Evaluated on 256 log-spaced h
// and refined around the best point until the relative change is below 1e-4.
// The sup over eta uses a log-spaced eta grid reaching down to h_min / 64.
absl::StatusOr<RiskBound> OracleRiskBound(const Density& density,
                                          const LepskiConfig& cfg, int64_t n);

}  // namespace ldpkde

#endif  // LDPKDE_LEPSKI_H_
