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

#include "ldpkde/gp_sampler.h"

#include <cmath>
#include <vector>

#include "Eigen/Core"
#include "gtest/gtest.h"
#include "ldpkde/kernels.h"
#include "ldpkde/privacy.h"
#include "ldpkde/random.h"

namespace ldpkde {
namespace {

PrivacyBudget Budget(double alpha, double beta) {
  return *PrivacyBudget::Create(alpha, beta);
}

std::vector<double> Linspace(double lo, double hi, int m) {
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = m == 1 ? lo : lo + (hi - lo) * i / (m - 1);
  return out;
}

Eigen::MatrixXd EmpiricalCovariance(const GramMatrix& gram, int samples,
                                    uint64_t seed) {
  const int m = gram.size();
  RandomStream rng(seed);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (int s = 0; s < samples; ++s) {
    const std::vector<double> p = SamplePath(gram, rng);
    Eigen::Map<const Eigen::VectorXd> v(p.data(), m);
    acc += v * v.transpose();
    mean += v;
  }
  mean /= samples;
  return acc / samples - mean * mean.transpose();
}

TEST(BuildGramTest, SincOnBandwidthSpacedGridIsIdentity) {
  const double h = 0.37;
  std::vector<double> pts;
  for (int i = -6; i <= 6; ++i) pts.push_back(1.0 + i * h);
  // Rounding in (t_i - t_j) / h can move the ratio off an integer by an ulp,
  // so compare to a few ulps rather than exactly.
  auto gram = *BuildGram(GetKernel(KernelName::kSinc), pts, h);
  EXPECT_TRUE(gram.entries().isApprox(
      Eigen::MatrixXd::Identity(pts.size(), pts.size()), 1e-14));
  EXPECT_EQ(gram.jitter_applied(), 0.0);
  std::vector<double> ints = {-3, -2, -1, 0, 1, 2, 3};
  auto exact = *BuildGram(GetKernel(KernelName::kSinc), ints, 1.0);
  EXPECT_EQ(exact.entries(), Eigen::MatrixXd::Identity(7, 7));
}

TEST(BuildGramTest, GaussianEntries) {
  const KernelSpec& g = GetKernel(KernelName::kGaussian);
  auto one = *BuildGram(g, std::vector<double>{0.0}, 3.0);
  EXPECT_EQ(one.entries()(0, 0), 1.0);
  auto two = *BuildGram(g, std::vector<double>{0.0, 0.7}, 0.7);
  EXPECT_DOUBLE_EQ(two.entries()(0, 1), std::exp(-0.5));
  EXPECT_DOUBLE_EQ(two.entries()(1, 0), std::exp(-0.5));
  EXPECT_EQ(two.entries()(1, 1), 1.0);
}

TEST(BuildGramTest, Errors) {
  const KernelSpec& g = GetKernel(KernelName::kGaussian);
  EXPECT_EQ(BuildGram(g, std::vector<double>{0.0, 1.0, 0.0}, 1.0)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BuildGram(g, std::vector<double>{}, 1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BuildGram(g, std::vector<double>{0.0}, 0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BuildGram(GetKernel(KernelName::kEpanechnikov),
                      std::vector<double>{0.0, 1.0}, 1.0)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(BuildGramTest, NoJitterOnWellSeparatedGaussianGrids) {
  for (int m = 1; m <= 8; ++m) {
    auto gram = *BuildGram(GetKernel(KernelName::kGaussian),
                           Linspace(-2.0, 2.0, m), 0.5);
    EXPECT_EQ(gram.jitter_applied(), 0.0) << m;
    EXPECT_TRUE((gram.cholesky_factor() * gram.cholesky_factor().transpose())
                    .isApprox(gram.entries(), 1e-12));
  }
}

TEST(BuildGramTest, DenseGridNeedsAndReportsJitter) {
  auto gram = *BuildGram(GetKernel(KernelName::kGaussian),
                         Linspace(0.0, 1.0, 200), 1.0);
  EXPECT_GT(gram.jitter_applied(), 0.0);
  Eigen::MatrixXd shifted = gram.entries();
  shifted.diagonal().array() += gram.jitter_applied();
  EXPECT_TRUE((gram.cholesky_factor() * gram.cholesky_factor().transpose())
                  .isApprox(shifted, 1e-10));
}

TEST(SamplePathTest, ScalarCaseReturnsTheNormalDraw) {
  auto gram = *BuildGram(GetKernel(KernelName::kGaussian),
                         std::vector<double>{0.0}, 1.0);
  RandomStream a(99), b(99);
  const double z = a.StandardNormal();
  EXPECT_EQ(SamplePath(gram, b)[0], z);
}

TEST(SamplePathTest, IdentityGramGivesIndependentNormals) {
  std::vector<double> ints = {0, 1, 2, 3, 4};
  auto gram = *BuildGram(GetKernel(KernelName::kSinc), ints, 1.0);
  const Eigen::MatrixXd cov = EmpiricalCovariance(gram, 100000, 3);
  EXPECT_LE((cov - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(),
            0.02);
}

TEST(SamplePathTest, GaussianPairCorrelation) {
  auto gram = *BuildGram(GetKernel(KernelName::kGaussian),
                         std::vector<double>{0.0, 0.4}, 0.4);
  const Eigen::MatrixXd cov = EmpiricalCovariance(gram, 100000, 4);
  const double corr = cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1));
  EXPECT_NEAR(corr, std::exp(-0.5), 0.02);
}

TEST(SamplePathTest, CovarianceConvergesForSeveralKernels) {
  for (KernelName k : {KernelName::kGaussian, KernelName::kTriangular,
                       KernelName::kExponential}) {
    for (int m : {3, 12}) {
      auto gram = *BuildGram(GetKernel(k), Linspace(-1.0, 1.0, m), 0.6);
      const Eigen::MatrixXd cov = EmpiricalCovariance(gram, 100000, 5 + m);
      EXPECT_LE((cov - gram.entries()).norm(), 0.05 * m)
          << KernelToString(k) << " m=" << m;
    }
  }
}

TEST(ReleaseCurveTest, ZeroNoiseGivesExactCurve) {
  const KernelSpec& g = GetKernel(KernelName::kGaussian);
  const std::vector<double> grid = Linspace(-1.0, 1.0, 9);
  auto rel = *CurveReleaser::Create(g, grid, 0.3, Budget(1.0, 0.05), 0.0);
  RandomStream rng(1);
  PrivateCurve c = rel.Release(0.25, 7, rng);
  ASSERT_EQ(c.values.size(), grid.size());
  for (size_t j = 0; j < grid.size(); ++j) {
    EXPECT_EQ(c.values[j], ScaledKernelValue(KernelName::kGaussian,
                                             0.25 - grid[j], 0.3));
  }
  EXPECT_EQ(c.owner_id, 7);
  EXPECT_EQ(c.noise_scale, 0.0);
  EXPECT_EQ(c.mechanism, Mechanism::kGaussianProcess);
}

TEST(ReleaseCurveTest, MeanOfReleasesIsTheKernelCurve) {
  const KernelSpec& g = GetKernel(KernelName::kGaussian);
  const std::vector<double> grid = Linspace(-1.0, 1.0, 5);
  auto rel = *CurveReleaser::Create(g, grid, 0.5, Budget(1.0, 0.05));
  RandomStream rng(8);
  constexpr int kN = 10000;
  std::vector<double> sum(grid.size());
  for (int i = 0; i < kN; ++i) {
    PrivateCurve c = rel.Release(0.1, i, rng);
    for (size_t j = 0; j < grid.size(); ++j) sum[j] += c.values[j];
  }
  for (size_t j = 0; j < grid.size(); ++j) {
    const double exact = ScaledKernelValue(KernelName::kGaussian, 0.1 - grid[j], 0.5);
    EXPECT_NEAR(sum[j] / kN, exact, 3.0 * rel.sigma() / std::sqrt(kN));
  }
}

TEST(ReleaseCurveTest, SigmaDoesNotDependOnGrid) {
  const KernelSpec& g = GetKernel(KernelName::kGaussian);
  auto small = *CurveReleaser::Create(g, Linspace(0, 1, 2), 0.5, Budget(1.0, 0.05));
  auto large = *CurveReleaser::Create(g, Linspace(0, 1, 40), 0.5, Budget(1.0, 0.05));
  EXPECT_EQ(small.sigma(), large.sigma());
  EXPECT_EQ(small.sigma(), *GaussianScale(*RkhsSensitivity(g, 0.5),
                                          Budget(1.0, 0.05)));
}

// Releasing on a fine grid and keeping a subset has the law of releasing on
// the subset directly: same mean and covariance.
TEST(ReleaseCurveTest, RestrictionConsistency) {
  const KernelSpec& g = GetKernel(KernelName::kGaussian);
  const std::vector<double> fine = Linspace(-1.0, 1.0, 9);
  const std::vector<double> coarse = {fine[1], fine[4], fine[7]};
  const int idx[] = {1, 4, 7};
  auto rf = *CurveReleaser::Create(g, fine, 0.5, Budget(2.0, 0.1));
  auto rc = *CurveReleaser::Create(g, coarse, 0.5, Budget(2.0, 0.1));
  constexpr int kN = 100000;
  RandomStream sf(21), sc(22);
  Eigen::MatrixXd cf = Eigen::MatrixXd::Zero(3, 3), cc = cf;
  Eigen::Vector3d mf = Eigen::Vector3d::Zero(), mc = mf;
  std::vector<double> buf_f(fine.size()), buf_c(coarse.size());
  for (int s = 0; s < kN; ++s) {
    rf.ReleaseInto(0.3, sf, absl::MakeSpan(buf_f));
    rc.ReleaseInto(0.3, sc, absl::MakeSpan(buf_c));
    Eigen::Vector3d vf(buf_f[idx[0]], buf_f[idx[1]], buf_f[idx[2]]);
    Eigen::Vector3d vc(buf_c[0], buf_c[1], buf_c[2]);
    mf += vf;
    mc += vc;
    cf += vf * vf.transpose();
    cc += vc * vc.transpose();
  }
  mf /= kN;
  mc /= kN;
  cf = cf / kN - mf * mf.transpose();
  cc = cc / kN - mc * mc.transpose();
  const double var = rf.sigma() * rf.sigma();
  EXPECT_LE((mf - mc).cwiseAbs().maxCoeff(), 5.0 * std::sqrt(2.0 * var / kN));
  EXPECT_LE((cf - cc).norm() / var, 0.05 * 3);
}

TEST(ReleaseLaplaceCurveTest, BudgetSplitOverGrid) {
  const KernelSpec& s = GetKernel(KernelName::kSinc);
  RandomStream rng(3);
  auto c = *ReleaseLaplaceCurve(s, 0.0, Linspace(-1, 1, 4), 0.5,
                                Budget(4.0, 0.0), rng);
  // Pointwise sensitivity 4 over alpha' = 1.
  EXPECT_DOUBLE_EQ(c.noise_scale, 4.0);
  EXPECT_EQ(c.values.size(), 4u);
}

}  // namespace
}  // namespace ldpkde
