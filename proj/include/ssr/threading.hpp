#pragma once

#include <cstddef>
#include <functional>

namespace ssr {

// Worker count: SRTOOL_THREADS if set (must be a positive integer), otherwise
// std::thread::hardware_concurrency().
unsigned worker_count();

// Runs fn(begin, end) over a static contiguous partition of [0, n) on up to
// worker_count() threads. fn must only write state disjoint per index, which
// keeps results identical to the serial order. Exceptions propagate.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace ssr
