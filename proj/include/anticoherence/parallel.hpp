#pragma once

#include <cstddef>
#include <functional>

namespace ac {

/// Worker count from AC_NUM_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Each index is visited exactly once; callers write results by index, so output
/// order never depends on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace ac
