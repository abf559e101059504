#include "ratecode/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ratecode {

std::size_t thread_budget() {
    const char* env = std::getenv("RATECODE_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 0) return 1;
    if (v == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
    return static_cast<std::size_t>(v);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = thread_budget();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (workers > count) workers = count;
    std::size_t chunk = count / workers;
    std::size_t rem = count % workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t begin = 0;
    for (std::size_t t = 0; t < workers; ++t) {
        std::size_t end = begin + chunk + (t < rem ? 1 : 0);
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

}  // namespace ratecode
