#pragma once

#include <cstdint>
#include <random>

namespace wleng {

/// Seeded pseudo-random source used throughout the simulator.
///
/// Integer and real draws are derived from the raw 64-bit engine output
/// with fixed arithmetic, so a given seed yields the same sequence on every
/// standard library (std::*_distribution are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Uniform integer in [lo, hi] (inclusive).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Uniform real in [0, 1).
    double uniform01();

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

/// Seed for sub-stream `stream` of `base` (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace wleng
