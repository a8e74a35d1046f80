#include "fsi/threading.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace fsi {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& fn) {
    const int workers = std::min<std::size_t>(g_threads, std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fsi
