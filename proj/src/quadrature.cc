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

#include "ldpkde/quadrature.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace ldpkde {
namespace {

constexpr unsigned kMaxDepth = 18;
// Relative to the integral of |f|; below this the Kronrod error estimate
// measures rounding rather than truncation.
constexpr double kRoundOffFloor = 1e-10;

}  // namespace

absl::StatusOr<double> Integrate(const std::function<double(double)>& f,
                                 double a, double b, double abs_tol) {
  if (!(a <= b)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Integrate: empty interval [%g, %g]", a, b));
  }
  if (a == b) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Boost's tolerance is relative to the magnitude of the integral, which is
  // unreachable for pieces whose integral is round-off sized. One fixed-rule
  // pass gives that magnitude, and the relative tolerance is chosen so the
  // adaptive pass aims at `abs_tol` in absolute terms.
  double error = 0.0;
  double l1 = 0.0;
  double value = Rule::integrate(f, a, b, 0, 0.0, &error, &l1);
  if (std::isfinite(value) && error <= abs_tol) return value;
  // Boost sums the per-panel error estimates, so deep recursion can report a
  // larger error than a shallow one once panels hit round-off. Keep the best.
  const double rel = abs_tol / std::max(std::abs(value), abs_tol);
  for (unsigned depth : {6u, kMaxDepth}) {
    double e = 0.0;
    double l = 0.0;
    const double v = Rule::integrate(f, a, b, depth, rel, &e, &l);
    if (std::isfinite(v) && (!std::isfinite(value) || e < error)) {
      value = v;
      error = e;
      l1 = l;
    }
    if (error <= abs_tol) break;
  }
  const double floor = std::max(abs_tol, kRoundOffFloor * l1);
  if (!std::isfinite(value) || error > floor) {
    return absl::InternalError(absl::StrFormat(
        "Integrate: no convergence on [%g, %g] (error estimate %g > %g)", a,
        b, error, floor));
  }
  return value;
}

absl::StatusOr<double> IntegratePiecewise(
    const std::function<double(double)>& f, double a, double b,
    absl::Span<const double> breakpoints, double abs_tol) {
  std::vector<double> cuts;
  cuts.reserve(breakpoints.size() + 2);
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double piece_tol = abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    absl::StatusOr<double> piece = Integrate(f, cuts[i], cuts[i + 1], piece_tol);
    if (!piece.ok()) return piece.status();
    total += *piece;
  }
  return total;
}

}  // namespace ldpkde
