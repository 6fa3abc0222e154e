#pragma once

// Static-partition parallel loops. Every index writes only its own slot,
// so results do not depend on the thread count.

#include <cstddef>
#include <functional>

namespace mdframe {

/// Hardware concurrency, capped by the MDFRAME_THREADS environment variable.
unsigned worker_count();

/// Calls body(i) for i in [0, n), spread over worker_count() threads.
/// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mdframe
