#pragma once

#include <cstddef>
#include <functional>

namespace nearinterp {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Each index runs exactly once; the exception of the lowest failing index
/// is rethrown after all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nearinterp
