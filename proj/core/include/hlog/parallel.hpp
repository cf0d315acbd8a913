#pragma once

#include <cstddef>
#include <functional>

namespace hlog {

/// Run fn(i) for i in [0, count) on up to `jobs` worker threads.  Each item
/// must write only to its own output slot; reductions happen after the loop
/// in index order, so results are identical for every worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int jobs);

} // namespace hlog
