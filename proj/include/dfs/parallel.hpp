#pragma once

#include <cstddef>
#include <functional>

namespace dfs {

/// Worker count for ensemble fan-out: DFS_WORKERS if set and positive,
/// otherwise the hardware concurrency.
std::size_t worker_count();

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. Callers write
/// results into slot i and reduce afterwards so the result does not depend
/// on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dfs
