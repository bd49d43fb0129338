#pragma once

#include <cstddef>
#include <functional>

namespace qopt {

/// Upper bound on worker threads used by grid-parallel evaluators (default 1;
/// 0 selects the hardware concurrency). Throws invalid_argument if negative.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; results
/// must be written to per-index slots so the output does not depend on the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qopt
