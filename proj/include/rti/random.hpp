#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rti {

/// Seeded generator used everywhere randomness is consumed.
///
/// The engine is mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard distributions are implementation-defined,
/// and vault files, transcripts and CSV fixtures must be identical across
/// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound). bound must be > 0.
    std::uint64_t uniform(std::uint64_t bound);

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();

    double normal(double mean, double stddev);

    bool bernoulli(double p) { return uniform01() < p; }

    // Independent child stream keyed by the construction seed and a label.
    // Depends only on the seed, not on how far *this has advanced.
    Rng fork(std::string_view label) const { return Rng(derive_seed(seed_, label)); }

    static std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rti
