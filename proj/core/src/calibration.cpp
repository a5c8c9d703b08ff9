#include "occflow/calibration.hpp"

#include "occflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace occflow {

std::vector<QuoteRow> read_quotes_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("read_quotes_csv: cannot open " + path);
    std::vector<QuoteRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string k, t, ty, b, a;
        if (!std::getline(ss, k, ',') || !std::getline(ss, t, ',') || !std::getline(ss, ty, ',') ||
            !std::getline(ss, b, ',') || !std::getline(ss, a))
            throw config_error("read_quotes_csv: malformed row '" + line + "'");
        if (first && (ty == "type")) {  // header
            first = false;
            continue;
        }
        first = false;
        QuoteRow q;
        try {
            q.strike = std::stod(k);
            q.maturity = std::stod(t);
            q.bid = std::stod(b);
            q.ask = std::stod(a);
        } catch (const std::exception&) {
            throw config_error("read_quotes_csv: malformed row '" + line + "'");
        }
        if (ty == "call" || ty == "c")
            q.type = OptionType::call;
        else if (ty == "put" || ty == "p")
            q.type = OptionType::put;
        else
            throw config_error("read_quotes_csv: unknown option type '" + ty + "'");
        if (q.bid < 0.0 || q.ask < q.bid)
            throw config_error("read_quotes_csv: need 0 <= bid <= ask");
        rows.push_back(q);
    }
    return rows;
}

void write_quotes_csv(const std::string& path, std::span<const QuoteRow> quotes) {
    std::ofstream out(path);
    if (!out) throw config_error("write_quotes_csv: cannot open " + path);
    out << "strike,maturity,type,bid,ask\n";
    char buf[128];
    for (const QuoteRow& q : quotes) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%s,%.12g,%.12g\n", q.strike, q.maturity,
                      q.type == OptionType::call ? "call" : "put", q.bid, q.ask);
        out << buf;
    }
}

CalibrationLoss calibration_loss(std::span<const double> model_prices,
                                 std::span<const QuoteRow> quotes, const MarketConvention& mkt,
                                 double vega_floor) {
    if (model_prices.size() != quotes.size())
        throw dimension_error("calibration_loss: instrument count mismatch");
    if (quotes.empty()) throw domain_error("calibration_loss: no instruments");

    CalibrationLoss out;
    out.weights.resize(quotes.size());
    double sq_err = 0.0, sq_spread = 0.0;
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        const QuoteRow& q = quotes[i];
        const double sig_bid =
            implied_vol(q.bid, mkt.spot, q.strike, q.maturity, mkt.rate, mkt.dividend, q.type);
        const double sig_ask =
            implied_vol(q.ask, mkt.spot, q.strike, q.maturity, mkt.rate, mkt.dividend, q.type);
        if (!(sig_ask > 0.0))
            throw domain_error("calibration_loss: zero ask implied vol");
        const double sig_mid =
            implied_vol(q.mid(), mkt.spot, q.strike, q.maturity, mkt.rate, mkt.dividend, q.type);
        const double vega =
            bs_vega(mkt.spot, q.strike, q.maturity, mkt.rate, mkt.dividend, sig_mid);
        const double w = (sig_bid / sig_ask) / std::max(vega, vega_floor);
        out.weights[i] = w;

        const double e = w * (model_prices[i] - q.mid());
        sq_err += e * e;
        const double s = w * (q.ask - q.bid);
        sq_spread += s * s;
    }
    const double inv_n = 1.0 / static_cast<double>(quotes.size());
    out.loss = std::sqrt(sq_err * inv_n);
    out.threshold = 0.5 * std::sqrt(sq_spread * inv_n);
    return out;
}

std::vector<QuoteRow> synthetic_bs_quotes(const MarketConvention& mkt,
                                          std::span<const double> strikes,
                                          std::span<const double> maturities, double sigma_mid,
                                          double vol_spread) {
    if (!(sigma_mid > 0.5 * vol_spread)) throw config_error("synthetic_bs_quotes: spread too wide");
    std::vector<QuoteRow> rows;
    rows.reserve(strikes.size() * maturities.size());
    for (double t : maturities)
        for (double k : strikes) {
            QuoteRow q;
            q.strike = k;
            q.maturity = t;
            const double fwd = mkt.spot * std::exp((mkt.rate - mkt.dividend) * t);
            q.type = (k < fwd) ? OptionType::put : OptionType::call;
            q.bid = bs_price(mkt.spot, k, t, mkt.rate, mkt.dividend, sigma_mid - 0.5 * vol_spread,
                             q.type);
            q.ask = bs_price(mkt.spot, k, t, mkt.rate, mkt.dividend, sigma_mid + 0.5 * vol_spread,
                             q.type);
            rows.push_back(q);
        }
    return rows;
}

}  // namespace occflow
