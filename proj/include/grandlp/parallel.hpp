#pragma once

#include <cstddef>
#include <functional>

namespace grandlp {

/// Worker cap: GRANDLP_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
unsigned worker_count();

/// Runs fn(0) .. fn(n-1) on up to worker_count() threads. The first exception
/// thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace grandlp
