#pragma once

#include <cstddef>
#include <functional>

namespace blockmodel {

/// Number of worker threads to use: `requested` if positive, otherwise the
/// hardware concurrency, capped by the BLOCKMODEL_THREADS environment
/// variable when it is set to a positive integer.
int resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` threads. Rethrows the
/// first exception raised by any job after all workers have stopped.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace blockmodel
