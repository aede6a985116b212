#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

// Deterministic RNG wrapper. std::mt19937_64 has a fixed output sequence per
// the standard, but the distribution adaptors do not, so bounded draws are
// done here with Lemire's unbiased multiply-shift rejection method.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform draw from [0, n).
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw invalid_input_error("Rng::bounded: n must be positive");
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// Standard normal draw via Box-Muller.
inline double gaussian(Rng& rng) {
    double u1 = rng.unit();
    while (u1 <= 0.0) u1 = rng.unit();
    double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// First k elements of a seeded partial Fisher-Yates shuffle of pool.
// Leaves pool reordered; the sample is pool[0..k).
inline void partial_shuffle(std::vector<std::size_t>& pool, std::size_t k, Rng& rng) {
    if (k > pool.size())
        throw invalid_input_error("partial_shuffle: sample larger than pool");
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.bounded(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
}

} // namespace ssr
