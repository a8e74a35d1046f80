#pragma once

#include <functional>

namespace fsi {

/// Worker count used by assembly loops; 1 by default (fully deterministic
/// either way, since triplet reduction sorts before summing).
void set_thread_count(int n);
int thread_count();

/// Run fn(begin, end, worker_index) over [0, n) split into contiguous chunks,
/// one per worker.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& fn);

}  // namespace fsi
