#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace normlab {

/// Worker count: NORMLAB_THREADS if set (>= 1), otherwise hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Each index must write only its own
/// output slot, so results do not depend on scheduling. If any call throws,
/// the exception of the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace normlab
