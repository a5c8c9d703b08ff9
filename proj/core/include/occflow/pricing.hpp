#pragma once

#include "occflow/payoffs.hpp"
#include "occflow/sde.hpp"

#include <cstdint>

namespace occflow {

struct PriceEstimate {
    double value = 0.0;
    double stderror = 0.0;
    std::size_t n_paths = 0;
    bool discounted = false;
};

// Discounted Monte Carlo estimate over the ensemble. Antithetic pairs are
// averaged before the variance is computed. The payoff's required clock must
// match the ensemble's.
PriceEstimate mc_price(const PayoffSpec& spec, const PathEnsemble& ensemble, double rate,
                       double maturity);

// Fair corridor-variance strike: K^2 = E[O_T([lo,hi])] / T under the
// quadratic clock.
PriceEstimate corridor_var_strike_mc(double lo, double hi, const PathEnsemble& ensemble,
                                     double maturity);

struct TimerPrice {
    PriceEstimate estimate;  // undiscounted (r = q = 0 convention)
    std::size_t budget_not_reached = 0;
};

// Timer call priced at the first step where the running quadratic mass
// crosses the budget; paths that never cross use the horizon-end value and
// are counted.
TimerPrice timer_price_mc(const TimerCall& spec, const PathEnsemble& ensemble);

}  // namespace occflow
