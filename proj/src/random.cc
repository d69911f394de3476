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

#include "ldpkde/random.h"

#include <cstdint>

#include "boost/random/laplace_distribution.hpp"
#include "boost/random/normal_distribution.hpp"
#include "boost/random/uniform_01.hpp"

namespace ldpkde {

uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(uint64_t seed)
    : seed_(seed), engine_(MixSeed(seed)) {}

RandomStream RandomStream::Split(uint64_t counter) const {
  return RandomStream(MixSeed(seed_ ^ MixSeed(counter + 1)));
}

double RandomStream::Uniform01() {
  boost::random::uniform_01<double> dist;
  return dist(engine_);
}

double RandomStream::StandardNormal() {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

double RandomStream::StandardLaplace() {
  boost::random::laplace_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

}  // namespace ldpkde
