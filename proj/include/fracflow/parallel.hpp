#pragma once

#include <cstddef>
#include <functional>

namespace fracflow {

/// Worker count: FRACFLOW_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Work is split
/// into contiguous chunks; results are deterministic as long as body(i) only
/// writes to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracflow
