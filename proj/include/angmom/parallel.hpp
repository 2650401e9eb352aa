#pragma once

#include <cstddef>
#include <functional>

namespace angmom {

/// Worker count: hardware concurrency, capped by PHOTON_ANGMOM_THREADS.
unsigned thread_count();

/// Split [0, n) into contiguous chunks and run body(begin, end) on each.
/// Chunk boundaries depend only on n and the thread count, so any reduction
/// the caller performs per chunk and then combines in chunk order is
/// reproducible for a fixed thread count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)> &body,
                  std::size_t min_chunk = 1);

} // namespace angmom
