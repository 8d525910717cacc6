#pragma once

#include <cstddef>
#include <functional>

namespace cubicvs {

// Global cap on worker threads; 0 restores the hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(block) for block in [0, blocks). Blocks are handed out dynamically, so
// callers must store per-block results and reduce them in block order to stay
// deterministic.
void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& fn);

}  // namespace cubicvs
