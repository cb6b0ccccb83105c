#pragma once

#include <cstddef>
#include <functional>

namespace tflag {

/// Worker count: TFLAG_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Work is
/// handed out in index order; callers write results into per-index slots so
/// the outcome never depends on scheduling. The first exception thrown by a
/// body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tflag
