#pragma once

#include <cstddef>
#include <functional>

namespace qfd {

/// Thread count from the QFD_THREADS environment variable, else the
/// hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers.
/// Work is claimed dynamically; callers write results into slot i so the
/// outcome never depends on scheduling. If any body throws, the exception of
/// the smallest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace qfd
