#pragma once

#include "occflow/corridor_grid.hpp"
#include "occflow/occupation.hpp"
#include "occflow/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace occflow::stopping {

// Value of the terminal-reward problem for Brownian motion: E of the spot
// local time at T equals sqrt(2T/pi).
double analytic_euro_value(double maturity);

// Corridor approximation of the terminal value:
// v_eps(T) = sqrt(2T/pi) - eps/2 + eps^2 / sqrt(18 pi T).
double eps_expansion(double maturity, double eps);

// Continuation value of the spot-local-time reward: bin masses integrated
// against the heat kernel at the bin nodes plus the fresh-start term
// sqrt(2(T-t)/pi). Calling it at t >= T is flagged and falls back to the
// terminal rule (the bin density at the spot).
double continuation_value(const DiscreteOccupation& occ, double spot, double t, double maturity,
                          bool* terminal_flag = nullptr);

struct StoppingResult {
    double value = 0.0;
    double stderror = 0.0;
    std::size_t n_paths = 0;
    std::string strategy;
    std::vector<double> exercise_freq;           // per decision step
    std::vector<std::vector<double>> coefficients;  // LSMC: beta per time step
    double offline_value = 0.0;                  // LSMC in-sample value
    double offline_stderror = 0.0;
    long ridge_events = 0;
    double mean_continuation = 0.0;              // two-date diagnostic
    bool snapped = false;                        // decision date moved onto the grid
};

// Equally spaced scan grid for the inspection strategy's argmax.
struct SpaceGrid {
    double lo = -2.0;
    double hi = 2.0;
    std::size_t n_intervals = 200;

    double spacing() const { return (hi - lo) / static_cast<double>(n_intervals); }
    double point(std::size_t i) const { return lo + spacing() * static_cast<double>(i); }
};

// Two-date problem: exercise at t or at T. Per path the corridor spot local
// time at t is compared against the continuation value; the value is the mean
// of the maximum. Results are independent of the worker count.
StoppingResult two_date_value(double maturity, double t, std::size_t n_steps, double eps,
                              std::size_t n_paths, std::uint64_t seed, GridPtr grid = nullptr,
                              int threads = 1);

// Inspection strategy: at iota find the level maximizing the corridor local
// time (ties toward the smallest |x|, then the smallest x) and stop at the
// first step bracketing it, else at T.
StoppingResult inspection_value(double iota, double maturity, std::size_t n_steps, double eps,
                                std::size_t n_paths, std::uint64_t seed,
                                const SpaceGrid& scan = {}, GridPtr grid = nullptr,
                                int threads = 1);

// Least squares Monte Carlo on the trinomial lattice with truncated local-time
// features and Laguerre basis (degrees 0..3, intercept once). Offline fits the
// per-step coefficients on J_off paths, online revalues them on J_on fresh
// paths; both phases use antithetic sampling. weighted_basis switches to the
// sqrt(w)-weighted Laguerre family, w(x) = e^-x.
StoppingResult lsmc_value(std::size_t m_bar, std::size_t n_steps, std::size_t n_paths_offline,
                          std::size_t n_paths_online, double maturity, std::uint64_t seed,
                          bool weighted_basis = false);

enum class SweepStrategy { european, inspection };

struct SweepRow {
    double eps = 0.0;
    double value = 0.0;
    double stderror = 0.0;
    double analytic = 0.0;  // eps_expansion reference (european strategy only)
};

// Value of the corridor reward per eps, either at the terminal date or under
// the inspection strategy; the same simulated paths are reused across eps.
std::vector<SweepRow> eps_sweep(SweepStrategy strategy, std::vector<double> eps_values,
                                double maturity, std::size_t n_steps, std::size_t n_paths,
                                std::uint64_t seed, double iota = 0.7,
                                const SpaceGrid& scan = {}, GridPtr grid = nullptr,
                                int threads = 1);

// Trinomial increment in node units {-1, 0, +1} with weights {1/6, 4/6, 1/6};
// single-sourced so tests and the LSMC driver share the mapping.
int trinomial_step(const CounterRng& rng, std::uint64_t stream, std::uint64_t step);

// Default occupation grid for the Brownian experiments: spacing 0.01 over
// [-4, 4], fine relative to every corridor width in use.
GridPtr default_stopping_grid();

}  // namespace occflow::stopping
