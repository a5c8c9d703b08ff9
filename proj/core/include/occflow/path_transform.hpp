#pragma once

#include "occflow/clock.hpp"
#include "occflow/occupation.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace occflow {

// Block time permutation: reorder N equal blocks by sigma and run block n
// backward when sign[n] == -1.
struct TimePermutation {
    std::vector<std::size_t> sigma;  // permutation of {0..N-1}
    std::vector<int> sign;           // entries in {-1, +1}

    std::size_t blocks() const { return sigma.size(); }
    void validate() const;
    TimePermutation inverse() const;
};

// Applies the permutation to a level sequence; length must split into
// perm.blocks() equal blocks.
std::vector<double> shuffle_path(std::span<const double> levels, const TimePermutation& perm);

// Calendar occupation of the piecewise-constant path taking value levels[i]
// on [i dt, (i+1) dt): every sample carries weight dt. This is the exact
// discrete carrier of chronology invariance.
DiscreteOccupation calendar_occupation(std::span<const double> levels, double dt, GridPtr grid,
                                       std::optional<double> x0 = std::nullopt);

// Occupation of a sampled path (times_0..times_N, levels_0..levels_N) under a
// clock. Calendar/exponential clocks accumulate the left endpoint of each
// step with the left-endpoint clock rate. The quadratic clock pairs each
// completed step's variance sigma_n^2 dt with the arrival level, so the mass
// sigma at time t never depends on the step it is about to drive.
DiscreteOccupation occupation_from_path(std::span<const double> times,
                                        std::span<const double> levels, const Clock& clock,
                                        GridPtr grid,
                                        std::span<const double> vols = {});

}  // namespace occflow
