#pragma once

#include <cstddef>
#include <functional>

namespace dwig {

/// Resolves a user thread count: 0 means hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers with static
/// interleaved assignment. Results must be written to per-index slots so the
/// caller can reduce them in index order. The first exception thrown by any
/// body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace dwig
