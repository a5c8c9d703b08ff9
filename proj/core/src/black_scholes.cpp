#include "occflow/black_scholes.hpp"

#include "occflow/errors.hpp"
#include "occflow/normal.hpp"

#include <algorithm>
#include <cmath>

namespace occflow {

namespace {

double intrinsic_forward(double fwd, double strike, double df, OptionType type) {
    const double s = (type == OptionType::call) ? fwd - strike : strike - fwd;
    return df * std::max(s, 0.0);
}

}  // namespace

double bs_price(double spot, double strike, double maturity, double rate, double dividend,
                double sigma, OptionType type) {
    if (spot <= 0.0 || strike < 0.0 || maturity < 0.0 || sigma < 0.0)
        throw domain_error("bs_price: invalid inputs");
    const double df = std::exp(-rate * maturity);
    const double fwd = spot * std::exp((rate - dividend) * maturity);
    const double stddev = sigma * std::sqrt(maturity);
    if (stddev == 0.0 || strike == 0.0) {
        if (strike == 0.0)
            return (type == OptionType::call) ? df * fwd : 0.0;
        return intrinsic_forward(fwd, strike, df, type);
    }
    const double d1 = std::log(fwd / strike) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    if (type == OptionType::call) return df * (fwd * norm_cdf(d1) - strike * norm_cdf(d2));
    return df * (strike * norm_cdf(-d2) - fwd * norm_cdf(-d1));
}

double bs_vega(double spot, double strike, double maturity, double rate, double dividend,
               double sigma) {
    if (spot <= 0.0 || strike <= 0.0 || maturity <= 0.0 || sigma < 0.0)
        throw domain_error("bs_vega: invalid inputs");
    const double df = std::exp(-rate * maturity);
    const double fwd = spot * std::exp((rate - dividend) * maturity);
    const double sqt = std::sqrt(maturity);
    const double stddev = sigma * sqt;
    if (stddev == 0.0) return 0.0;
    const double d1 = std::log(fwd / strike) / stddev + 0.5 * stddev;
    return df * fwd * norm_pdf(d1) * sqt;
}

double implied_vol(double price, double spot, double strike, double maturity, double rate,
                   double dividend, OptionType type) {
    if (spot <= 0.0 || strike <= 0.0 || maturity <= 0.0)
        throw domain_error("implied_vol: invalid inputs");
    const double df = std::exp(-rate * maturity);
    const double fwd = spot * std::exp((rate - dividend) * maturity);
    const double lower = intrinsic_forward(fwd, strike, df, type);
    const double upper = (type == OptionType::call) ? df * fwd : df * strike;
    const double tol = 1e-10 * spot;
    if (price < lower - tol || price > upper + tol)
        throw numeric_error("implied_vol: price outside no-arbitrage bounds");

    double lo = 1e-9, hi = 16.0;
    auto f = [&](double sigma) {
        return bs_price(spot, strike, maturity, rate, dividend, sigma, type) - price;
    };
    if (f(lo) > 0.0) return 0.0;      // at or below intrinsic
    if (f(hi) < 0.0) return hi;       // saturated, cannot happen inside the band

    double sigma = 0.2;
    for (int it = 0; it < 100; ++it) {
        const double diff = f(sigma);
        if (std::abs(diff) < tol) return sigma;
        if (diff > 0.0)
            hi = sigma;
        else
            lo = sigma;
        const double vega = bs_vega(spot, strike, maturity, rate, dividend, sigma);
        double next = (vega > 1e-14) ? sigma - diff / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sigma = next;
    }
    if (std::abs(f(sigma)) < 1e2 * tol) return sigma;
    throw numeric_error("implied_vol: root finding failed to converge");
}

}  // namespace occflow
