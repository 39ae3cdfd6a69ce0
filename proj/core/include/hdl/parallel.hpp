#pragma once

#include <cstddef>
#include <functional>

namespace hdl {

/// Number of worker threads used by parallel_for. Defaults to the hardware
/// concurrency; 1 disables threading.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for every i in [0, count). Work is split into contiguous
/// blocks; callers write results into per-index slots and reduce afterwards,
/// which keeps results bit-identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hdl
