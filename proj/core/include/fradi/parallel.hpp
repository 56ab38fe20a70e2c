#pragma once

#include <cstdint>
#include <functional>

namespace fradi {

/// Worker count: hardware concurrency, capped by the FRADI_THREADS
/// environment variable when set.
int worker_count();

/// Runs fn(i) for i in [0, n) on up to `workers` threads (worker_count() when
/// workers <= 0). Tasks must write to disjoint outputs; scheduling order is
/// unspecified but tasks themselves are run exactly once.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn, int workers = 0);

}  // namespace fradi
