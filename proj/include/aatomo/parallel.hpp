#pragma once

#include <cstddef>
#include <functional>

namespace aatomo {

/// Worker count: AATOMO_THREADS when set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over disjoint chunks of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace aatomo
