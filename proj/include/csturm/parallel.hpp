#pragma once

#include <cstddef>
#include <functional>

namespace csturm {

// Worker count: COMPLEX_STURM_THREADS if set (>= 1), else the hardware
// concurrency capped at 8.
unsigned thread_count();

// Runs fn(i) for i in [0, n). If any call throws, the exception of the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace csturm
