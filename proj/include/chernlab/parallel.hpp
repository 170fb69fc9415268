#pragma once

#include <cstddef>
#include <functional>

namespace chernlab {

/// Worker count: CHERNLAB_THREADS when set to a positive integer, otherwise
/// (unset or 0) the hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Each index
/// runs exactly once; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace chernlab
