#pragma once

#include <cstddef>
#include <functional>

namespace oscicell {

// Resolve a thread-count request: n > 0 is taken literally, n == 0 consults
// OSCICELL_THREADS and falls back to hardware_concurrency.
int resolve_threads(int requested);

// Static block partition of [0,n) over `threads` workers. The body receives
// [begin,end) ranges; results must not depend on the partition for runs to be
// reproducible across thread counts.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace oscicell
