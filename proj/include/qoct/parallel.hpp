#pragma once

#include <cstddef>
#include <functional>

namespace qoct {

/// Worker count: QOCT_THREADS if set and positive, otherwise hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qoct
