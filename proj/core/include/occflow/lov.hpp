#pragma once

#include "occflow/local_vol.hpp"
#include "occflow/occupation.hpp"
#include "occflow/sde.hpp"

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace occflow {

// Variance sensitivity to extra occupation at a level: ell(t, spot, level).
struct SensitivityFunction {
    enum class Kind { zero, one_factor, ema, tanh_moneyness };

    Kind kind = Kind::zero;
    double beta = 0.0;        // one_factor / ema scale
    double lo = 0.0;          // one_factor corridor [lo, hi]
    double hi = 0.0;
    double alpha = 1.0;       // tanh steepness
    double var_floor = 0.0;   // tanh amplitude = var_floor / 4 (inf of sigma_loc^2)

    static SensitivityFunction zero() { return {}; }
    static SensitivityFunction one_factor(double beta, double lo, double hi);
    static SensitivityFunction ema(double beta);
    // ell = (1/4) inf(sigma_loc^2) tanh(alpha x / spot); passes the positivity
    // guard by a factor-two margin.
    static SensitivityFunction tanh_moneyness(double alpha, const LocalVolTable& sigma_loc);

    double operator()(double t, double spot, double level) const;
    // sup over levels of |ell(t, spot, .)|, used by the positivity guard.
    double sup_abs(double t, double spot, std::span<const double> levels) const;
};

struct LovConfig {
    LocalVolTable sigma_loc = LocalVolTable::constant(0.2);
    SensitivityFunction ell;
    bool multiplicative = false;  // variance factor (1 + gamma sum) vs additive correction
    double kappa = 0.0;           // exponential clock rate of the occupation flow
    double bandwidth_kappa = 1.5; // h_n = bandwidth_kappa * sd(spots) * J^{-bandwidth_exponent}
    double bandwidth_exponent = 0.2;
    double var_floor = 1e-8;      // flooring level for unguarded negative variances
};

// gamma_t = 1 / (total mass of the exponential-clock occupation at t):
// kappa / (e^{kappa t} - 1) for kappa > 0, 1/t for kappa = 0. At t = 0 the
// LOV correction term is defined as zero.
double gamma_scale(double kappa, double t);

struct PositivityReport {
    bool pass = true;
    double worst_margin = 0.0;  // min over the scan of (bound - sup|ell|)
    double worst_time = 0.0;
    double worst_spot = 0.0;
};

// Checks sup_x |ell(t, x', x)| < sigma_loc^2(t, x')/2 (additive) or < 1/2
// (multiplicative) over the given time grid and level grid.
PositivityReport check_positivity(const LovConfig& cfg, std::span<const double> times,
                                  std::span<const double> levels);

// Occupied variance: sigma_loc^2 plus the gamma-scaled pairing of ell with
// the spread between realized and projected occupations. Negative results are
// floored at cfg.var_floor and counted, never silent.
double lov_variance(const DiscreteOccupation& occ, const DiscreteOccupation& occ_hat, double spot,
                    double t, const LovConfig& cfg, std::atomic<long>* floor_counter = nullptr);

// Nadaraya-Watson projection of per-path occupation vectors onto the spot,
// with the compact-support quartic kernel psi(d) = (15/16)(1-(d/h)^2)^2/h.
// occ[j] is path j's mass vector (length M); the result has the same layout.
// The self-weight psi(0) > 0 keeps every denominator positive.
std::vector<std::vector<double>> particle_projection(std::span<const double> spots,
                                                     const std::vector<std::vector<double>>& occ,
                                                     double bandwidth, int threads = 0);

struct LovSimResult {
    PathEnsemble ensemble;
    PositivityReport positivity;
    long floor_events = 0;
    // Final-step diagnostics for the smile-calibration centering check.
    std::vector<double> final_spots;
    std::vector<double> final_corrections;  // gamma * sum ell (O - Ohat), variance units
};

// Step-synchronized ensemble simulation: update occupations, project with the
// particle method, evaluate the occupied variance, then log-Euler step.
// cfg.clock is ignored; the occupation flow always runs on the exponential
// clock with rate lov.kappa.
LovSimResult simulate_lov(const SimConfig& cfg, const LovConfig& lov);

}  // namespace occflow
