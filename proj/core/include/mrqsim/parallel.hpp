// Copyright 2026 The mrqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace mrqsim {

/// Thread budget for element-wise ensemble updates. Results never depend on
/// the thread count: work is split into contiguous chunks of independent
/// elements and reductions go through pairwise_sum in a fixed order.
struct Executor {
  unsigned threads = 1;
};

/// Calls fn(begin, end) over contiguous chunks of [0, n).
template <typename Fn>
void parallel_for(std::size_t n, const Executor& exec, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(exec.threads, n / 1024 + 1));
  if (workers == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

/// Pairwise (cascade) summation with a fixed split pattern, so the result
/// depends only on the input order.
template <typename T>
T pairwise_sum(std::span<const T> values, T zero) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    T acc = zero;
    for (const auto& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half), zero) + pairwise_sum(values.subspan(half), zero);
}

}  // namespace mrqsim
