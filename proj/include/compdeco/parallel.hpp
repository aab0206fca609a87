#pragma once

#include <cstddef>
#include <functional>

namespace compdeco {

/// Worker count: COMPDECO_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Nested calls
/// from inside a worker run serially. The first exception thrown by any body
/// is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace compdeco
