#include "qec/util.hpp"

#include <atomic>
#include <cstdio>
#include <thread>
#include <vector>

namespace qec {

void run_sharded(std::size_t num_shards, int threads,
                 const std::function<void(std::size_t)>& worker) {
    if (threads <= 1 || num_shards <= 1) {
        for (std::size_t s = 0; s < num_shards; ++s) worker(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (;;) {
            std::size_t s = next.fetch_add(1);
            if (s >= num_shards) return;
            worker(s);
        }
    };
    std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                           num_shards);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(loop);
    for (auto& th : pool) th.join();
}

std::string format_double(double v) {
    // Shortest round-tripping decimal: try increasing precision.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return std::string(buf);
}

}  // namespace qec
