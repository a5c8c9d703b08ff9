#pragma once

#include "occflow/black_scholes.hpp"

#include <span>
#include <string>
#include <vector>

namespace occflow {

struct QuoteRow {
    double strike = 0.0;
    double maturity = 0.0;
    OptionType type = OptionType::call;
    double bid = 0.0;
    double ask = 0.0;

    double mid() const { return 0.5 * (bid + ask); }
};

// CSV schema: strike,maturity,type,bid,ask with type in {call,put,c,p}.
std::vector<QuoteRow> read_quotes_csv(const std::string& path);
void write_quotes_csv(const std::string& path, std::span<const QuoteRow> quotes);

struct MarketConvention {
    double spot = 100.0;
    double rate = 0.0;
    double dividend = 0.0;
};

struct CalibrationLoss {
    double loss = 0.0;       // weighted RMS of model-vs-mid price errors
    double threshold = 0.0;  // alpha, the half bid/ask-spread RMS under the same weights
    std::vector<double> weights;
};

// Vega-weighted RMS calibration loss: w_i = (vega_i^mid v eps_vega)^{-1}
// (sigma_i^bid / sigma_i^ask), loss = sqrt(mean |w_i (pi_i - mid_i)|^2).
// Vanishing ask implied vols make the liquidity ratio undefined.
CalibrationLoss calibration_loss(std::span<const double> model_prices,
                                 std::span<const QuoteRow> quotes, const MarketConvention& mkt,
                                 double vega_floor = 1e-2);

// Synthetic Black-Scholes quote set: mid vols from sigma(K,T), bid/ask
// shifted by half the vol spread. Self-contained surface for tests and demos.
std::vector<QuoteRow> synthetic_bs_quotes(const MarketConvention& mkt,
                                          std::span<const double> strikes,
                                          std::span<const double> maturities, double sigma_mid,
                                          double vol_spread);

}  // namespace occflow
