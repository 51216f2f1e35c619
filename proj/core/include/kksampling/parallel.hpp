#pragma once

#include <cstddef>
#include <functional>

namespace kks {

/// Worker count used by parallel_for. 0 selects the hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over a static partition of [0, n) into contiguous
/// blocks, one per worker. Each index is owned by exactly one block, so
/// results written per index are independent of the thread count. The first
/// exception (lowest block) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace kks
