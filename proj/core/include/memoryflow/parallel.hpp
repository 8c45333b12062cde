#pragma once

#include <cstddef>
#include <functional>

namespace memoryflow {

// worker count from MEMORYFLOW_THREADS, else hardware concurrency
std::size_t worker_count();

// runs fn(begin, end) over contiguous chunks of [0, n); blocks until done.
// max_workers = 0 means worker_count().
void parallel_for(std::size_t n, std::size_t max_workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace memoryflow
