#pragma once

#include <cstdint>
#include <random>

namespace forksim::sim {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `stream` under run seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// MT19937-64 with portable conversions. The engine's state transition is
/// fixed by the C++ standard; the conversions below avoid
/// std::*_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given mean, by inversion.
    double exponential(double mean);

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

} // namespace forksim::sim
