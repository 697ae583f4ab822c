#pragma once

#include <cstddef>
#include <functional>

namespace sgcn {

/// Number of workers used by row-parallel kernels. Defaults to 1.
void set_worker_count(std::size_t workers);
std::size_t worker_count();

/// Calls body(begin, end) over contiguous blocks covering [0, n). Each row is
/// owned by exactly one worker, so per-row results do not depend on the
/// worker count.
void parallel_rows(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace sgcn
