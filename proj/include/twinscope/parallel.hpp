#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace twinscope {

// 0 means one thread per hardware core.
inline unsigned resolve_threads(unsigned requested) noexcept {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

inline std::size_t chunk_count(std::size_t n, unsigned threads) noexcept {
    if (n == 0) return 0;
    return std::min<std::size_t>(resolve_threads(threads), n);
}

// Calls fn(chunk, begin, end) for chunk in [0, chunk_count(n, threads)), each
// on its own thread. Chunk boundaries depend only on (n, threads), so callers
// that keep per-chunk or per-index results and merge them in chunk order get
// output independent of scheduling. The first exception thrown is rethrown.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    const std::size_t chunks = chunk_count(n, threads);
    if (chunks == 0) return;
    const std::size_t block = (n + chunks - 1) / chunks;
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = std::min(n, c * block);
        std::size_t end = std::min(n, begin + block);
        pool.emplace_back([&, c, begin, end] {
            try {
                if (begin < end) fn(c, begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// fn(begin, end) over contiguous blocks of [0, n).
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    parallel_chunks(n, threads, [&fn](std::size_t, std::size_t begin, std::size_t end) { fn(begin, end); });
}

}  // namespace twinscope
