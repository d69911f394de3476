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

#include "ldpkde/privacy.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "ldpkde/kernels.h"
#include "ldpkde/random.h"

namespace ldpkde {
namespace {

PrivacyBudget Budget(double alpha, double beta, int64_t k = 1) {
  return *PrivacyBudget::Create(alpha, beta, k);
}

TEST(BudgetTest, Validation) {
  EXPECT_FALSE(PrivacyBudget::Create(0.0, 0.0).ok());
  EXPECT_FALSE(PrivacyBudget::Create(-1.0, 0.0).ok());
  EXPECT_FALSE(PrivacyBudget::Create(INFINITY, 0.0).ok());
  EXPECT_FALSE(PrivacyBudget::Create(1.0, 1.5).ok());
  EXPECT_FALSE(PrivacyBudget::Create(1.0, -0.1).ok());
  EXPECT_FALSE(PrivacyBudget::Create(1.0, 0.1, 0).ok());
  EXPECT_TRUE(PrivacyBudget::Create(1.0, 1.0).ok());
}

TEST(ComposeTest, SplitsEvenly) {
  auto c = *Compose(Budget(2.0, 0.1), 4);
  EXPECT_DOUBLE_EQ(c.alpha_eff(), 0.5);
  EXPECT_DOUBLE_EQ(c.beta_eff(), 0.025);
  auto one = *Compose(Budget(2.0, 0.1), 1);
  EXPECT_DOUBLE_EQ(one.alpha_eff(), 2.0);
  EXPECT_EQ(Compose(Budget(1.0, 0.0), 0).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ComposeTest, Associative) {
  auto ab = *Compose(*Compose(Budget(3.0, 0.2), 3), 5);
  auto direct = *Compose(Budget(3.0, 0.2), 15);
  EXPECT_DOUBLE_EQ(ab.alpha_eff(), direct.alpha_eff());
  EXPECT_DOUBLE_EQ(ab.beta_eff(), direct.beta_eff());
}

TEST(LaplaceScaleTest, Examples) {
  EXPECT_DOUBLE_EQ(*LaplaceScale(2.0, Budget(1.0, 0.0)), 2.0);
  EXPECT_NEAR(*LaplaceScale(4.0, Budget(0.5, 0.5)), 4.0 / (0.5 + std::log(2.0)),
              1e-14);
  EXPECT_NEAR(*LaplaceScale(4.0, Budget(0.5, 0.5)), 3.3524783, 1e-7);
  EXPECT_DOUBLE_EQ(*LaplaceScale(1.0, Budget(1.0, 1.0)), 0.0);
  EXPECT_LT(*LaplaceScale(1.0, Budget(1.0, 1.0 - 1e-12)), 0.05);
  EXPECT_EQ(LaplaceScale(-1.0, Budget(1.0, 0.0)).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(LaplaceScaleTest, DecreasingInBudget) {
  double prev = INFINITY;
  for (double a : {0.1, 0.5, 1.0, 2.0, 8.0}) {
    const double b = *LaplaceScale(1.0, Budget(a, 0.0));
    EXPECT_LT(b, prev);
    prev = b;
  }
  prev = INFINITY;
  for (double beta : {0.0, 0.1, 0.5, 0.9}) {
    const double b = *LaplaceScale(1.0, Budget(1.0, beta));
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(GaussianScaleTest, Examples) {
  EXPECT_NEAR(*GaussianScale(1.0, Budget(1.0, 0.05)), 2.5700526, 1e-7);
  EXPECT_NEAR(*GaussianScale(1.0, Budget(1.0, 0.05)),
              std::sqrt(2.0 * std::log(10.0) + 2.0), 1e-14);
  EXPECT_DOUBLE_EQ(*GaussianScale(0.0, Budget(1.0, 0.05)), 0.0);
  EXPECT_NEAR(*GaussianScale(2.0, Budget(2.0, 0.25)),
              std::sqrt(2.0 * std::log(2.0) + 4.0), 1e-14);
  EXPECT_NEAR(*GaussianScale(2.0, Budget(2.0, 0.25)), 2.3208392, 1e-7);
}

TEST(GaussianScaleTest, BetaOutOfRange) {
  for (double beta : {0.0, 0.5, 0.7, 1.0}) {
    EXPECT_EQ(GaussianScale(1.0, Budget(1.0, beta)).status().code(),
              absl::StatusCode::kOutOfRange)
        << beta;
  }
  // Composition can bring beta' into range.
  EXPECT_TRUE(GaussianScale(1.0, Budget(1.0, 0.6, 2)).ok());
}

// The Gaussian mechanism with scale sigma is (alpha, beta)-private whenever
// P(Z > sigma alpha / Delta - Delta / (2 sigma)) <= beta for the standard
// normal Z. Check this tail bound at the calibrated scale.
TEST(GaussianScaleTest, TailConditionHolds) {
  for (double alpha : {0.2, 1.0, 3.0}) {
    for (double beta : {1e-4, 0.01, 0.05, 0.3}) {
      const double delta = 1.7;
      const double sigma = *GaussianScale(delta, Budget(alpha, beta));
      const double z = sigma * alpha / delta - delta / (2.0 * sigma);
      const double tail = 0.5 * std::erfc(z / std::sqrt(2.0));
      EXPECT_LE(tail, beta) << alpha << " " << beta;
    }
  }
}

TEST(NoiseCoefficientTest, Examples) {
  const KernelSpec& sinc = GetKernel(KernelName::kSinc);
  const KernelSpec& gauss = GetKernel(KernelName::kGaussian);
  EXPECT_NEAR(*NoiseCoefficient(sinc, Budget(1.0, 0.0), Mechanism::kLaplace),
              2.0 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(*NoiseCoefficient(gauss, Budget(1.0, 0.05),
                                Mechanism::kGaussianProcess),
              1.4499969, 1e-6);
  EXPECT_NEAR(*NoiseCoefficient(sinc, Budget(1.0, 0.05),
                                Mechanism::kGaussianProcess),
              std::sqrt(2.6) * std::sqrt(2.0 * std::log(10.0) + 2.0), 1e-12);
  EXPECT_NEAR(*NoiseCoefficient(sinc, Budget(1.0, 0.05),
                                Mechanism::kGaussianProcess),
              4.144085, 1e-6);
  EXPECT_EQ(NoiseCoefficient(GetKernel(KernelName::kRectangular),
                             Budget(1.0, 0.05), Mechanism::kGaussianProcess)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(NoiseCoefficientTest, MatchesPerPointStandardDeviation) {
  // Laplace noise with scale b has sd b sqrt(2); the coefficient is that sd
  // times h.
  for (double h : {0.1, 0.5, 2.0}) {
    auto n = *CalibrateLaplace(GetKernel(KernelName::kTriangular), h,
                               Budget(0.7, 0.1));
    EXPECT_NEAR(n.scale * std::sqrt(2.0) * h, n.c_ab, 1e-12);
    auto g = *CalibrateGaussianProcess(GetKernel(KernelName::kGaussian), h,
                                       Budget(0.7, 0.1));
    EXPECT_NEAR(g.scale * h, g.c_ab, 1e-12);
  }
}

TEST(MechanismNamesTest, RoundTrip) {
  EXPECT_EQ(*MechanismFromString("laplace"), Mechanism::kLaplace);
  EXPECT_EQ(*MechanismFromString("gp"), Mechanism::kGaussianProcess);
  EXPECT_EQ(MechanismToString(Mechanism::kGaussianProcess), "gp");
  EXPECT_FALSE(MechanismFromString("exponential").ok());
}

TEST(ReleaseTest, DeterministicUnderSeed) {
  const KernelSpec& k = GetKernel(KernelName::kSinc);
  RandomStream a(5), b(5), c(6);
  const double va = *ReleaseScalarLaplace(0.3, k, 0.5, Budget(1.0, 0.0), a);
  const double vb = *ReleaseScalarLaplace(0.3, k, 0.5, Budget(1.0, 0.0), b);
  const double vc = *ReleaseScalarLaplace(0.3, k, 0.5, Budget(1.0, 0.0), c);
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(ReleaseTest, MomentsOfReleases) {
  auto rel = *LaplaceReleaser::Create(GetKernel(KernelName::kSinc), 0.5,
                                      Budget(1.0, 0.0));
  ASSERT_DOUBLE_EQ(rel.scale(), 4.0);
  RandomStream rng(17);
  constexpr int kN = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double v = rel.Release(1.25, rng) - 1.25;
    sum += v;
    sq += v * v;
  }
  const double sd = 4.0 * std::sqrt(2.0);
  EXPECT_NEAR(sum / kN, 0.0, 5.0 * sd / std::sqrt(kN));
  EXPECT_NEAR(sq / kN, sd * sd, 0.03 * sd * sd);
}

// Empirical privacy loss on a histogram of releases from two neighbouring
// inputs at the extremes of the kernel's range.
TEST(ReleaseTest, HistogramLikelihoodRatioBounded) {
  const KernelSpec& k = GetKernel(KernelName::kSinc);
  const double h = 1.0;
  const double alpha = 1.0;
  auto rel = *LaplaceReleaser::Create(k, h, Budget(alpha, 0.0));
  const double v0 = KernelValue(KernelName::kSinc, 0.0) / h;
  const double v1 =
      KernelValue(KernelName::kSinc, KernelArgMin(KernelName::kSinc)) / h;
  constexpr int kN = 400000;
  constexpr int kBins = 50;
  const double lo = -4.0 * rel.scale(), hi = 4.0 * rel.scale();
  std::vector<double> c0(kBins), c1(kBins);
  RandomStream r0(1), r1(2);
  for (int i = 0; i < kN; ++i) {
    for (auto [v, rng, counts] :
         {std::tuple{v0, &r0, &c0}, std::tuple{v1, &r1, &c1}}) {
      const double z = rel.Release(v, *rng);
      const int bin = static_cast<int>((z - lo) / (hi - lo) * kBins);
      if (bin >= 0 && bin < kBins) (*counts)[bin] += 1.0;
    }
  }
  for (int b = 0; b < kBins; ++b) {
    if (c0[b] < 2000 || c1[b] < 2000) continue;
    const double ratio = std::log(c0[b] / c1[b]);
    const double se = std::sqrt(1.0 / c0[b] + 1.0 / c1[b]);
    EXPECT_LE(std::abs(ratio), alpha + 4.0 * se) << "bin " << b;
  }
}

}  // namespace
}  // namespace ldpkde
