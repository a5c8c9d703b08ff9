#pragma once

#include <cmath>

namespace occflow {

// Clock driving the occupation increments: dt (calendar), e^{kappa t} dt
// (exponential, emphasising recent history), or sigma^2 dt (quadratic
// variation). Exponential with kappa = 0 coincides with calendar time.
struct Clock {
    enum class Kind { calendar, exponential, quadratic_variation };

    Kind kind = Kind::calendar;
    double kappa = 0.0;

    static Clock calendar() { return {Kind::calendar, 0.0}; }
    static Clock exponential(double kappa) { return {Kind::exponential, kappa}; }
    static Clock quadratic_variation() { return {Kind::quadratic_variation, 0.0}; }

    bool needs_vol() const { return kind == Kind::quadratic_variation; }

    // Weight of a [t, t+dt) interval; quadratic clocks pass the step vol.
    double increment(double t, double dt, double sigma = 0.0) const {
        switch (kind) {
            case Kind::calendar: return dt;
            case Kind::exponential: return std::exp(kappa * t) * dt;
            case Kind::quadratic_variation: return sigma * sigma * dt;
        }
        return dt;
    }
};

}  // namespace occflow
