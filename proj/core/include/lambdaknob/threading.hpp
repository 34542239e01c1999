#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace lambdaknob {

/// Worker count for sweep fan-out: hardware concurrency, capped by the
/// LAMBDA_KNOB_THREADS environment variable when set.
int worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads.  Work items
/// must be independent; results keyed by index stay deterministic regardless
/// of scheduling.  The first exception thrown by any item is rethrown.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lambdaknob
