#pragma once

namespace occflow {

enum class OptionType { call, put };

// Black-Scholes price with continuous rate r and dividend yield q. Degenerate
// inputs (sigma = 0 or T = 0) return the discounted forward intrinsic value.
double bs_price(double spot, double strike, double maturity, double rate, double dividend,
                double sigma, OptionType type);

double bs_vega(double spot, double strike, double maturity, double rate, double dividend,
               double sigma);

// Safeguarded Newton/bisection root of bs_price(sigma) = price, converged to
// |f| < 1e-10 * spot. Prices outside the static no-arbitrage band raise
// numeric_error.
double implied_vol(double price, double spot, double strike, double maturity, double rate,
                   double dividend, OptionType type);

}  // namespace occflow
