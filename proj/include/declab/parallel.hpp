#pragma once

#include <cstddef>
#include <functional>

namespace declab {

// Runs fn over [0, n) split into contiguous ranges, one per worker. Callers
// write results into per-index slots (or per-fixed-chunk slots), so output
// never depends on the worker count. workers <= 1 runs inline.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Default worker count (hardware concurrency, at least 1).
int default_workers();

}  // namespace declab
