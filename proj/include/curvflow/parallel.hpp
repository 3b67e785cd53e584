#ifndef CURVFLOW_PARALLEL_HPP
#define CURVFLOW_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace curvflow {

// Number of worker threads to use. Reads CURVFLOW_THREADS on every call
// (0 or unset means hardware concurrency); result is clamped to [1, 64].
int worker_count();

// Splits [0, count) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. Chunk boundaries depend only on `count` and the
// worker count; callers must keep per-index writes disjoint and reductions
// order-independent so results do not depend on the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace curvflow

#endif
