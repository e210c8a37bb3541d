#pragma once

#include <cstdlib>
#include <functional>
#include <future>
#include <thread>
#include <vector>

namespace causalforge {

// worker cap: CAUSAL_FORGE_THREADS overrides hardware concurrency
inline unsigned worker_count() {
    if (const char* env = std::getenv("CAUSAL_FORGE_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// index-ordered parallel map; results are deterministic regardless of
// schedule because slot i always holds f(i)
template <typename R, typename F>
std::vector<R> parallel_map(std::size_t count, F&& f) {
    std::vector<R> results(count);
    const unsigned workers = std::min<std::size_t>(worker_count(), count == 0 ? 1 : count);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = f(i);
        return results;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w]() {
            for (std::size_t i = w; i < count; i += workers) results[i] = f(i);
        }));
    }
    for (auto& fut : futures) fut.get();
    return results;
}

} // namespace causalforge
