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

#ifndef LDPKDE_QUADRATURE_H_
#define LDPKDE_QUADRATURE_H_

#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace ldpkde {

// Adaptive 15-point Gauss-Kronrod over [a, b]. Fails with an internal
// (numerical) error when the error estimate exceeds `abs_tol`.
absl::StatusOr<double> Integrate(const std::function<double(double)>& f,
                                 double a, double b, double abs_tol);

// Same, but the interval is first cut at every breakpoint strictly inside
// (a, b). Use it for integrands with kinks or sign changes at known places.
// The tolerance is shared out evenly across the pieces.
absl::StatusOr<double> IntegratePiecewise(
    const std::function<double(double)>& f, double a, double b,
    absl::Span<const double> breakpoints, double abs_tol);

}  // namespace ldpkde

#endif  // LDPKDE_QUADRATURE_H_
