#pragma once

#include "occflow/clock.hpp"
#include "occflow/corridor_grid.hpp"
#include "occflow/local_vol.hpp"
#include "occflow/occupation.hpp"
#include "occflow/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace occflow {

struct SimConfig {
    double horizon = 1.0;     // T, years
    std::size_t n_steps = 0;  // N
    std::size_t n_paths = 0;  // J
    std::uint64_t seed = 0;
    bool antithetic = false;  // path j >= J/2 mirrors path j - J/2
    double rate = 0.0;
    double dividend = 0.0;
    double x0 = 0.0;
    Clock clock;
    GridPtr grid;
    bool store_paths = false;  // keep full (times, levels, vols) per path
    int threads = 0;           // 0 = machine parallelism
    // Dates (snapped to the step grid) at which per-path occupation snapshots
    // are kept alongside the terminal one.
    std::vector<double> snapshot_times;

    void validate() const;
    double dt() const { return horizon / static_cast<double>(n_steps); }
};

// Volatility read from the (occupation, spot, time) state. Implementations
// must be shareable read-only across worker threads.
using VolatilityFunctional = std::function<double(const DiscreteOccupation&, double x, double t)>;

VolatilityFunctional constant_vol(double sigma);
VolatilityFunctional local_vol(LocalVolTable table);

// Guyon's trend-following toy volatility: Sigma(y) = -alpha/beta + gamma y^-beta
// evaluated at the trend y = x / EMA(occ), clamped below at zero. Before any
// mass has accumulated the trend convention is y = x / x0.
struct GuyonToyVol {
    double alpha = 2.1;
    double beta = 1.2;
    double gamma = 1.9;
    double x0 = 100.0;

    double trend(const DiscreteOccupation& occ, double x) const;
    double operator()(const DiscreteOccupation& occ, double x, double t) const;
};

// Exponentially weighted moving average of the visited levels: the barycenter
// first_moment / total_mass of the (exponential-clock) occupation.
double ema(const DiscreteOccupation& occ);

struct OccupiedPath {
    double terminal_level = 0.0;
    DiscreteOccupation occupation;  // terminal snapshot
    std::vector<double> times;      // empty unless store_paths
    std::vector<double> levels;
    std::vector<double> vols;                     // one per step
    std::vector<DiscreteOccupation> snapshots;    // one per requested snapshot date
};

struct PathEnsemble {
    SimConfig config;
    std::vector<OccupiedPath> paths;

    std::size_t size() const { return paths.size(); }
};

// Standard Brownian paths X_{n+1} = X_n + sqrt(dt) Z from x0, full storage.
// Antithetic pairs negate increments exactly.
std::vector<std::vector<double>> simulate_bm(const SimConfig& cfg);

// Log-Euler scheme for the occupied SDE: per step, accumulate occupation at
// the current level, evaluate sigma from (occupation, spot), then
// X <- X exp(sigma sqrt(dt) Z + (r - q - sigma^2/2) dt). Under the quadratic
// clock the occupation weight of a step is booked at its arrival level once
// the step's sigma is known. Non-finite sigma aborts with (path, step, state)
// diagnostics.
PathEnsemble euler_occupied(const SimConfig& cfg, const VolatilityFunctional& vol);

}  // namespace occflow
