#pragma once

#include <functional>

#include "tensordict/tensor.hpp"

namespace tensordict {

/// Worker count used by parallel_for. Defaults to TENSORDICT_THREADS when set,
/// otherwise 1. Values below 1 are clamped to 1.
int thread_count();
void set_thread_count(int threads);

/// Calls body(i) for every i in [begin, end) on up to thread_count() threads.
/// Each index runs exactly once; callers write results to per-index slots so
/// the outcome does not depend on scheduling. The first exception thrown is
/// rethrown after all workers finish.
void parallel_for(Index begin, Index end, const std::function<void(Index)>& body);

}  // namespace tensordict
