#pragma once

#include <cstddef>
#include <functional>

namespace cgc::harness {

// 0 means "use the available hardware parallelism".
std::size_t resolve_workers(std::size_t requested);

// Runs fn(0) .. fn(n - 1) on up to `workers` threads. Tasks are claimed in
// index order. fn must not throw; wrap failures into the task's own result.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace cgc::harness
