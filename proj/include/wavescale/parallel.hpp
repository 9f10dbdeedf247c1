#pragma once

#include <cstddef>
#include <functional>

namespace wavescale {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Callers write results into per-index slots, so the outcome
// is independent of scheduling. The first exception thrown by any worker is
// rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace wavescale
