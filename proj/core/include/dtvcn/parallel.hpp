#pragma once

#include <cstddef>
#include <functional>

namespace dtvcn {

/// Worker count: DTVCN_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Work is handed
/// out by index, so callers that write to slot i get results independent of
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dtvcn
