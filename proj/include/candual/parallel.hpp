#ifndef CANDUAL_PARALLEL_HPP
#define CANDUAL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace candual {

/// Runs body(i) for i in [0, count) across hardware threads. Each index owns
/// its output slot, so results are independent of scheduling. Setting the
/// CANDUAL_SERIAL environment variable forces a single-threaded loop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace candual

#endif
