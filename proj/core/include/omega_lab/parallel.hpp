#pragma once

#include <cstddef>
#include <functional>

namespace omega_lab {

/// Worker count: OMEGA_LAB_THREADS if set and positive, otherwise hardware concurrency.
unsigned default_thread_count();

/// Runs task(i) for every i in [0, count) on up to `threads` workers.
/// Tasks are claimed dynamically; callers write results into per-index slots so
/// the outcome never depends on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace omega_lab
