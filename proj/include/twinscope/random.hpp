#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

// Portable draws on top of std::mt19937_64. The engine's output sequence is
// fixed by the standard; the std::*_distribution adaptors are not, so seeded
// outputs go through these instead.
namespace twinscope::rng {

using Engine = std::mt19937_64;

// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t below(Engine& g, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t x = g();
        if (x >= threshold) return x % n;
    }
}

// Uniform integer in [lo, hi].
inline std::int64_t between(Engine& g, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(g, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Uniform double in [0, 1).
inline double unit(Engine& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& g, double p) {
    return unit(g) < p;
}

// Standard normal via Box-Muller; consumes exactly two engine outputs.
inline double normal(Engine& g) {
    double u1 = 1.0 - unit(g);  // (0, 1]
    double u2 = unit(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace twinscope::rng
