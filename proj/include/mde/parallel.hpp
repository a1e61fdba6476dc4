#pragma once

#include <cstddef>
#include <functional>

namespace mde {

/// Runs fn(i) for every i in [0, n) on up to `threads` workers.
///
/// Callers must make fn(i) write only to per-index slots, so the result is
/// identical whatever the scheduling; with threads <= 1 the loop runs inline.
/// The first exception thrown by any invocation is rethrown on the caller's
/// thread after all workers join.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace mde
