#pragma once

#include <cstddef>
#include <functional>

namespace couette {

/// Worker count: COUETTE_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
[[nodiscard]] std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. Each
/// index runs exactly once; the first exception thrown is rethrown after all
/// workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace couette
