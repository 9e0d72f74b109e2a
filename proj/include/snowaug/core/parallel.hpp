#pragma once

#include <cstddef>
#include <functional>

namespace snowaug {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out dynamically, so fn must write only to item-local state.
/// The first exception thrown by fn is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace snowaug
