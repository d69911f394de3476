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

#ifndef LDPKDE_PRIVATE_CURVE_H_
#define LDPKDE_PRIVATE_CURVE_H_

#include <cstdint>
#include <vector>

#include "ldpkde/privacy.h"

namespace ldpkde {

// One owner's released kernel curve Z_{i,h}(t_j) at bandwidth h.
struct PrivateCurve {
  std::vector<double> grid;
  std::vector<double> values;
  Mechanism mechanism = Mechanism::kLaplace;
  double h = 0.0;
  // b (Laplace) or sigma (GP) actually used.
  double noise_scale = 0.0;
  // Diagonal jitter added to the Gram matrix before sampling (GP only).
  double jitter = 0.0;
  int64_t owner_id = 0;
};

}  // namespace ldpkde

#endif  // LDPKDE_PRIVATE_CURVE_H_
