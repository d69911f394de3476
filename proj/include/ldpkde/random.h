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

#ifndef LDPKDE_RANDOM_H_
#define LDPKDE_RANDOM_H_

#include <cstdint>
#include <random>

namespace ldpkde {

// A seeded source of randomness. Every randomized operation in the library
// takes one of these explicitly; nothing reads ambient entropy.
//
// Streams are derived from a master seed by counter-based splitting: the
// child seed is a SplitMix64 mix of (parent seed, counter), so stream k of a
// run does not depend on how many other streams were created or in which
// order. The engine is std::mt19937_64 and the variates come from
// Boost.Random distributions, both of which are specified bit-for-bit, so a
// seed reproduces the same draws on every platform.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed);

  // Independent child stream number `counter` of this stream.
  RandomStream Split(uint64_t counter) const;

  // Stream `counter` of the run seeded by `master_seed`.
  static RandomStream Derive(uint64_t master_seed, uint64_t counter) {
    return RandomStream(master_seed).Split(counter);
  }

  double Uniform01();
  double StandardNormal();
  // Laplace(1): density exp(-|x|)/2, variance 2.
  double StandardLaplace();

  uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; exposed for seed derivation in tests.
uint64_t MixSeed(uint64_t x);

}  // namespace ldpkde

#endif  // LDPKDE_RANDOM_H_
