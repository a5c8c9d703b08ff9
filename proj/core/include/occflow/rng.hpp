#pragma once

#include <array>
#include <cstdint>

namespace occflow {

// Philox4x32-10 counter-based generator. Every draw is a pure function of
// (seed, path, step, substream), so ensembles are reproducible regardless of
// worker count and extending the path count leaves existing paths unchanged.
namespace philox {

std::array<std::uint32_t, 4> block(std::uint64_t key, const std::array<std::uint32_t, 4>& counter);

}  // namespace philox

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // Uniform draw in (0,1), strictly interior so it can feed norm_inv_cdf.
    double uniform(std::uint64_t path, std::uint64_t step, std::uint32_t substream = 0) const;

    // Standard normal via inverse-CDF; exactly one draw per (path, step, substream).
    double normal(std::uint64_t path, std::uint64_t step, std::uint32_t substream = 0) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace occflow
