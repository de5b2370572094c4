#pragma once

#include <cstddef>
#include <functional>

namespace reldom {

// Worker count: RELDOM_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs f(i) for i in [0, n) on up to thread_count() threads. Work is split
// into contiguous blocks, so results written by index are deterministic.
// The first exception (lowest block) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace reldom
