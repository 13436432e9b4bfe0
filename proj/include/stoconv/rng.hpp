#pragma once

#include <cstdint>
#include <random>

namespace stoconv {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for the stream identified by (master, a, b). Distinct keys give
/// statistically independent streams; equal keys give identical ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Seeded source of uniform and standard normal variates for one Monte Carlo path.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    /// Independent child stream keyed by `tag`, drawn from this stream.
    RandomStream split(std::uint64_t tag);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace stoconv
