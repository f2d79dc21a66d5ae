#pragma once

#include <cstddef>
#include <functional>

namespace histofeat {

/// Worker count: hardware concurrency, capped by HISTOFEAT_THREADS when set.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Work items are claimed dynamically, so body must only write to slots keyed
/// by i. The first exception thrown by any item is rethrown after all workers
/// stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace histofeat
