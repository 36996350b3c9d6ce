#pragma once

#include <cstddef>
#include <functional>

namespace fraclap {

/// Number of worker threads: FRACLAP_THREADS when set (>= 1), otherwise the
/// hardware concurrency. set_thread_cap overrides both for the process.
int thread_count();
void set_thread_cap(int threads);

/// Runs body(i) for i in [0, count). Indices are split into contiguous
/// chunks; callers write results by index so output never depends on the
/// number of threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fraclap
