#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace wavechannel {

// Runs body(begin, end) over [0, n) split into at most `workers` contiguous
// chunks. Callers only use it for independent per-index work, so results do
// not depend on the worker count.
inline void parallel_for(int n, int workers, const std::function<void(int, int)>& body) {
  workers = std::clamp(workers, 1, std::max(n, 1));
  if (workers == 1) {
    body(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const int chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const int b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, chunk));
}

}  // namespace wavechannel
