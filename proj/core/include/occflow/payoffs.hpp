#pragma once

#include "occflow/black_scholes.hpp"
#include "occflow/sde.hpp"

#include <variant>

namespace occflow {

// Occupation payoffs phi(O_T, X_T). Calendar-clock payoffs read the terminal
// calendar occupation; corridor-variance and timer payoffs need the quadratic
// clock (and the timer additionally the stored per-step vols).
struct AsianFloatingCall {};
struct LookbackFloatingCall {};
struct RangeAccrual {
    double lo, hi;
    double coupon;
};
struct ParisianUpOutAssetOrNothing {
    double barrier;
    double window;
};
struct CorridorVarFloatingLeg {
    double lo, hi;
};
struct TimerCall {
    double variance_budget;
    double strike;
};
struct VanillaCall {
    double strike;
};
struct VanillaPut {
    double strike;
};

using PayoffSpec = std::variant<AsianFloatingCall, LookbackFloatingCall, RangeAccrual,
                                ParisianUpOutAssetOrNothing, CorridorVarFloatingLeg, TimerCall,
                                VanillaCall, VanillaPut>;

void validate(const PayoffSpec& spec);

// Clock the payoff needs the ensemble to carry.
Clock::Kind required_clock(const PayoffSpec& spec);

// Deterministic functional of (terminal occupation, terminal level); Asian
// and lookback route through the exact accumulators, untouched by binning.
double evaluate_payoff(const PayoffSpec& spec, const OccupiedPath& path);

// Timer exercise: first step whose cumulative variance reaches the budget.
// Paths that never reach it within the horizon fall back to the final value
// and are flagged.
struct TimerExercise {
    double payoff = 0.0;
    bool budget_reached = false;
};
TimerExercise timer_exercise(const TimerCall& spec, const OccupiedPath& path);

}  // namespace occflow
