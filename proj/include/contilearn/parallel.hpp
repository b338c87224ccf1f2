#pragma once

#include <cstddef>
#include <functional>

namespace contilearn {

/// Worker count from CONTILEARN_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs task(i) for i in [0, n) on up to `workers` threads. Tasks write to
/// their own slot, so results never depend on scheduling. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace contilearn
