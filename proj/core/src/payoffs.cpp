#include "occflow/payoffs.hpp"

#include "occflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace occflow {

void validate(const PayoffSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RangeAccrual> ||
                          std::is_same_v<T, CorridorVarFloatingLeg>) {
                if (!(s.lo < s.hi)) throw config_error("payoff: corridor bounds out of order");
            } else if constexpr (std::is_same_v<T, ParisianUpOutAssetOrNothing>) {
                if (!(s.window > 0.0)) throw config_error("payoff: window must be positive");
            } else if constexpr (std::is_same_v<T, TimerCall>) {
                if (!(s.variance_budget > 0.0)) throw config_error("payoff: budget must be positive");
                if (!(s.strike > 0.0)) throw config_error("payoff: strike must be positive");
            } else if constexpr (std::is_same_v<T, VanillaCall> || std::is_same_v<T, VanillaPut>) {
                if (!(s.strike > 0.0)) throw config_error("payoff: strike must be positive");
            }
        },
        spec);
}

Clock::Kind required_clock(const PayoffSpec& spec) {
    if (std::holds_alternative<CorridorVarFloatingLeg>(spec) ||
        std::holds_alternative<TimerCall>(spec))
        return Clock::Kind::quadratic_variation;
    return Clock::Kind::calendar;
}

TimerExercise timer_exercise(const TimerCall& spec, const OccupiedPath& path) {
    if (path.vols.empty() || path.levels.size() != path.vols.size() + 1)
        throw config_error("timer_exercise: path carries no per-step vol record");
    double cum = 0.0;
    for (std::size_t n = 0; n < path.vols.size(); ++n) {
        cum += path.vols[n] * path.vols[n] * (path.times[n + 1] - path.times[n]);
        if (cum >= spec.variance_budget)
            return {std::max(path.levels[n + 1] - spec.strike, 0.0), true};
    }
    return {std::max(path.levels.back() - spec.strike, 0.0), false};
}

double evaluate_payoff(const PayoffSpec& spec, const OccupiedPath& path) {
    const DiscreteOccupation& occ = path.occupation;
    const double xt = path.terminal_level;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AsianFloatingCall>) {
                return std::max(xt - occ.first_moment() / occ.total_mass(), 0.0);
            } else if constexpr (std::is_same_v<T, LookbackFloatingCall>) {
                return std::max(xt - occ.support_bounds().first, 0.0);
            } else if constexpr (std::is_same_v<T, RangeAccrual>) {
                return s.coupon * occ.mass_in(s.lo, s.hi) / occ.total_mass();
            } else if constexpr (std::is_same_v<T, ParisianUpOutAssetOrNothing>) {
                const double above = occ.mass_in(s.barrier,
                                                 std::numeric_limits<double>::infinity());
                return above < s.window ? xt : 0.0;
            } else if constexpr (std::is_same_v<T, CorridorVarFloatingLeg>) {
                return occ.mass_in(s.lo, s.hi);
            } else if constexpr (std::is_same_v<T, TimerCall>) {
                return timer_exercise(s, path).payoff;
            } else if constexpr (std::is_same_v<T, VanillaCall>) {
                return std::max(xt - s.strike, 0.0);
            } else {
                return std::max(s.strike - xt, 0.0);
            }
        },
        spec);
}

}  // namespace occflow
