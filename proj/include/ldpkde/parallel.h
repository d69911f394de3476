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

#ifndef LDPKDE_PARALLEL_H_
#define LDPKDE_PARALLEL_H_

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace ldpkde {

// Calls fn(i) for i in [0, count) on up to `jobs` threads (<= 0: all cores),
// each thread taking one contiguous block. fn must only write to slots owned
// by i; callers reduce afterwards in index order.
template <typename Fn>
void ParallelFor(int64_t count, int jobs, Fn&& fn) {
  if (jobs <= 0) {
    jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  jobs = static_cast<int>(std::min<int64_t>(jobs, count));
  if (jobs <= 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    const int64_t begin = count * w / jobs;
    const int64_t end = count * (w + 1) / jobs;
    workers.emplace_back([begin, end, &fn] {
      for (int64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace ldpkde

#endif  // LDPKDE_PARALLEL_H_
