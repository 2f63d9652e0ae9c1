// rng.hpp -- deterministic randomness: counter-based per-arm streams for the
// bandit environment, and a sequential stream for algorithm-internal draws.
// Nothing here uses std::*_distribution, so sequences are identical across
// standard library implementations.
#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace cpex {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stateless hash of a (seed, stream, counter, lane) tuple to 64 bits.
inline std::uint64_t mix4(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter, std::uint64_t lane) {
    std::uint64_t h = splitmix64(seed ^ 0x7f4a7c15f39cc060ULL);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ counter);
    h = splitmix64(h ^ lane);
    return h;
}

/// Uniform double in [0, 1) from 64 random bits (53-bit mantissa path).
inline double u01(std::uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as a log() argument.
inline double u01_open0(std::uint64_t bits) {
    return double((bits >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via Box-Muller from a counter-based tuple.
inline double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = u01_open0(mix4(seed, stream, counter, 0));
    const double u2 = u01(mix4(seed, stream, counter, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Uniform in [-1, 1) from a counter-based tuple.
inline double counter_symmetric_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return 2.0 * u01(mix4(seed, stream, counter, 0)) - 1.0;
}

/// Sequential RNG for algorithm-internal randomness (FTPL perturbations,
/// instance generators). mt19937_64 output is pinned by the standard.
class rng_stream {
public:
    explicit rng_stream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }
    double uniform01() { return u01(gen_()); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    // upper bound exclusive
    std::uint64_t uniform_index(std::uint64_t n) { return gen_() % n; }
    double gaussian() {
        const double u1 = u01_open0(gen_());
        const double u2 = u01(gen_());
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace cpex
