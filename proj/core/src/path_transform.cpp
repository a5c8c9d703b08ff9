#include "occflow/path_transform.hpp"

#include "occflow/errors.hpp"

#include <algorithm>
#include <vector>

namespace occflow {

void TimePermutation::validate() const {
    if (sigma.size() != sign.size())
        throw dimension_error("TimePermutation: sigma/sign length mismatch");
    std::vector<bool> seen(sigma.size(), false);
    for (std::size_t s : sigma) {
        if (s >= sigma.size() || seen[s]) throw domain_error("TimePermutation: sigma not a bijection");
        seen[s] = true;
    }
    for (int x : sign)
        if (x != 1 && x != -1) throw domain_error("TimePermutation: signs must be +-1");
}

TimePermutation TimePermutation::inverse() const {
    validate();
    TimePermutation inv;
    inv.sigma.resize(sigma.size());
    inv.sign.resize(sign.size());
    for (std::size_t n = 0; n < sigma.size(); ++n) {
        inv.sigma[sigma[n]] = n;
        inv.sign[sigma[n]] = sign[n];
    }
    return inv;
}

std::vector<double> shuffle_path(std::span<const double> levels, const TimePermutation& perm) {
    perm.validate();
    const std::size_t n_blocks = perm.blocks();
    if (n_blocks == 0 || levels.size() % n_blocks != 0)
        throw dimension_error("shuffle_path: length not divisible into equal blocks");
    const std::size_t block = levels.size() / n_blocks;

    std::vector<double> out(levels.size());
    for (std::size_t n = 0; n < n_blocks; ++n) {
        const double* src = levels.data() + perm.sigma[n] * block;
        double* dst = out.data() + n * block;
        if (perm.sign[n] == 1)
            std::copy(src, src + block, dst);
        else
            std::reverse_copy(src, src + block, dst);
    }
    return out;
}

DiscreteOccupation calendar_occupation(std::span<const double> levels, double dt, GridPtr grid,
                                       std::optional<double> x0) {
    if (!(dt > 0.0)) throw domain_error("calendar_occupation: dt must be positive");
    DiscreteOccupation occ = x0 ? DiscreteOccupation(std::move(grid), *x0)
                                : DiscreteOccupation(std::move(grid));
    for (double x : levels) occ.accumulate(x, dt);
    return occ;
}

DiscreteOccupation occupation_from_path(std::span<const double> times,
                                        std::span<const double> levels, const Clock& clock,
                                        GridPtr grid, std::span<const double> vols) {
    if (times.size() != levels.size() || times.size() < 2)
        throw dimension_error("occupation_from_path: need matching times/levels with >= 2 samples");
    const std::size_t n_steps = times.size() - 1;
    if (clock.needs_vol() && vols.size() != n_steps)
        throw dimension_error("occupation_from_path: quadratic clock needs one vol per step");

    DiscreteOccupation occ(std::move(grid), levels[0]);
    if (clock.needs_vol()) {
        for (std::size_t n = 0; n < n_steps; ++n)
            occ.accumulate(levels[n + 1],
                           clock.increment(times[n], times[n + 1] - times[n], vols[n]));
    } else {
        for (std::size_t n = 0; n < n_steps; ++n)
            occ.accumulate(levels[n], clock.increment(times[n], times[n + 1] - times[n]));
    }
    return occ;
}

}  // namespace occflow
