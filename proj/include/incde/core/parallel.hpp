#pragma once

#include <cstddef>
#include <functional>

namespace incde {

/// Worker count from INCDE_THREADS (default 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on thread_count() workers using a static
/// contiguous partition, so results never depend on scheduling as long as
/// body(i) only writes to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace incde
