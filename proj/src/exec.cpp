#include "polylab/exec.hpp"

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "polylab/errors.hpp"

namespace polylab {

namespace {
std::size_t g_table_budget = kDefaultTableBudget;
int g_threads = 1;
constexpr std::size_t kChunks = 256;
}  // namespace

std::size_t default_table_budget() { return g_table_budget; }
void set_default_table_budget(std::size_t entries) { g_table_budget = entries ? entries : 1; }

int thread_count() { return g_threads; }
void set_thread_count(int threads) { g_threads = threads < 1 ? 1 : threads; }

std::optional<std::size_t> checked_pow(std::uint8_t p, int n, std::size_t cap) {
    std::size_t v = 1;
    for (int i = 0; i < n; ++i) {
        if (v > cap / p) return std::nullopt;
        v *= p;
    }
    return v;
}

std::size_t require_table_size(std::uint8_t p, int n, std::size_t budget, const char* what) {
    auto v = checked_pow(p, n, budget);
    if (!v)
        throw budget_error(std::string(what) + ": table of " + std::to_string(int(p)) + "^" +
                           std::to_string(n) + " entries exceeds budget " + std::to_string(budget));
    return *v;
}

void parallel_for_chunked(std::size_t total,
                          const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (total == 0) return;
    const std::size_t nchunks = total < kChunks ? total : kChunks;
    const std::size_t chunk = (total + nchunks - 1) / nchunks;
    if (g_threads <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::size_t b = c * chunk;
            const std::size_t e = std::min(total, b + chunk);
            if (b < e) fn(c, b, e);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            const std::size_t b = c * chunk;
            const std::size_t e = std::min(total, b + chunk);
            if (b < e) fn(c, b, e);
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(g_threads, static_cast<int>(nchunks));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace polylab
