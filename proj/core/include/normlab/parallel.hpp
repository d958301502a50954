#pragma once

#include <cstddef>
#include <functional>

namespace normlab {

/// Global worker count for parallel_for (0 = hardware concurrency).
void set_thread_count(unsigned k);
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() workers. Callers are
/// responsible for writing results into per-index slots and reducing them in
/// index order afterwards, which keeps every reduction deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace normlab
