#pragma once

#include <cstddef>
#include <functional>

namespace sbss {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Each index must write only its own output slot; results are then
/// independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sbss
