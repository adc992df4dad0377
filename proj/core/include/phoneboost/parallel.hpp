#pragma once

#include <cstddef>
#include <functional>

namespace phoneboost {

/// Worker count: PHONEBOOST_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; the first exception thrown by any worker is rethrown on the caller.
/// Callers must write results into per-index slots so that output does not
/// depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Same as parallel_for, but hands each worker its whole [begin, end) chunk.
/// Chunk boundaries depend only on n and the worker count.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body,
                     std::size_t max_chunks = 0);

}  // namespace phoneboost
