#include "occflow/pricing.hpp"

#include "occflow/errors.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace occflow {

namespace {

// Mean and standard error with antithetic pairs collapsed first.
PriceEstimate reduce(const std::vector<double>& values, bool antithetic) {
    std::vector<double> samples;
    if (antithetic) {
        const std::size_t half = values.size() / 2;
        samples.reserve(half);
        for (std::size_t j = 0; j < half; ++j)
            samples.push_back(0.5 * (values[j] + values[j + half]));
    } else {
        samples = values;
    }
    const std::size_t n = samples.size();
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var = (n > 1) ? var / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n)), values.size(), false};
}

}  // namespace

PriceEstimate mc_price(const PayoffSpec& spec, const PathEnsemble& ensemble, double rate,
                       double maturity) {
    if (ensemble.paths.empty()) throw domain_error("mc_price: empty ensemble");
    validate(spec);
    if (required_clock(spec) != ensemble.config.clock.kind) {
        if (!(required_clock(spec) == Clock::Kind::calendar &&
              ensemble.config.clock.kind == Clock::Kind::exponential &&
              ensemble.config.clock.kappa == 0.0))
            throw config_error("mc_price: ensemble clock does not match the payoff");
    }

    std::vector<double> values(ensemble.size());
    for (std::size_t j = 0; j < ensemble.size(); ++j)
        values[j] = evaluate_payoff(spec, ensemble.paths[j]);

    PriceEstimate est = reduce(values, ensemble.config.antithetic);
    const double df = std::exp(-rate * maturity);
    est.value *= df;
    est.stderror *= df;
    est.discounted = true;
    return est;
}

PriceEstimate corridor_var_strike_mc(double lo, double hi, const PathEnsemble& ensemble,
                                     double maturity) {
    if (ensemble.paths.empty()) throw domain_error("corridor_var_strike_mc: empty ensemble");
    if (ensemble.config.clock.kind != Clock::Kind::quadratic_variation)
        throw config_error("corridor_var_strike_mc: quadratic clock not recorded");
    if (!(maturity > 0.0)) throw domain_error("corridor_var_strike_mc: maturity must be positive");

    std::vector<double> values(ensemble.size());
    for (std::size_t j = 0; j < ensemble.size(); ++j)
        values[j] = (lo < hi) ? ensemble.paths[j].occupation.mass_in(lo, hi) : 0.0;

    PriceEstimate est = reduce(values, ensemble.config.antithetic);
    est.value /= maturity;
    est.stderror /= maturity;
    return est;
}

TimerPrice timer_price_mc(const TimerCall& spec, const PathEnsemble& ensemble) {
    if (ensemble.paths.empty()) throw domain_error("timer_price_mc: empty ensemble");
    if (ensemble.config.clock.kind != Clock::Kind::quadratic_variation)
        throw config_error("timer_price_mc: quadratic clock not recorded");
    validate(PayoffSpec{spec});

    TimerPrice out;
    std::vector<double> values(ensemble.size());
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
        const TimerExercise ex = timer_exercise(spec, ensemble.paths[j]);
        values[j] = ex.payoff;
        if (!ex.budget_reached) ++out.budget_not_reached;
    }
    out.estimate = reduce(values, ensemble.config.antithetic);
    return out;
}

}  // namespace occflow
