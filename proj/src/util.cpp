#include "iwsk/util.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace iwsk {

unsigned worker_threads() {
    static const unsigned cached = [] {
        if (const char* env = std::getenv("IWSK_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v <= 0) return 1u;
            return static_cast<unsigned>(v);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : hw;
    }();
    return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned nt = worker_threads();
    if (nt <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, n));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (unsigned t = 0; t + 1 < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace iwsk
