#pragma once

#include <cstddef>
#include <functional>

namespace landpat {

/// Upper bound on worker threads used by parallel kernels. 0 restores the
/// hardware default. Results never depend on this value.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Calls `body(i)` for every i in [0, n), splitting the range into
/// contiguous chunks across worker threads. Exceptions thrown by a worker
/// are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace landpat
