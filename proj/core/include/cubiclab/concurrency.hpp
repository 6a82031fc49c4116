#pragma once

#include <cstddef>
#include <functional>

namespace cubiclab {

/// Number of worker threads: CUBICLAB_WORKERS if set and positive, otherwise
/// the available hardware parallelism (at least 1).
int worker_count();

/// Overrides worker_count() for the current process; 0 restores the default.
void set_worker_count(int workers);

/// Runs body(slab) for every slab in [0, slabs). Slabs are distributed over
/// worker_count() threads; callers write results into a per-slab slot and
/// reduce them in slab order, so the worker count never changes results.
void parallel_slabs(std::size_t slabs, const std::function<void(std::size_t)>& body);

}  // namespace cubiclab
