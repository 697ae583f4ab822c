#include "sgcn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sgcn {

namespace {
std::atomic<std::size_t> g_workers{1};
constexpr std::size_t kMinRowsPerWorker = 256;
} // namespace

void set_worker_count(std::size_t workers) { g_workers = std::max<std::size_t>(1, workers); }

std::size_t worker_count() { return g_workers; }

void parallel_rows(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t workers = std::min(g_workers.load(), std::max<std::size_t>(1, n / kMinRowsPerWorker));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(0, std::min(n, chunk));
}

} // namespace sgcn
