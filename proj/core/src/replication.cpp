#include "occflow/replication.hpp"

#include "occflow/black_scholes.hpp"
#include "occflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace occflow {

OtmSurface bs_otm_surface(double spot, double sigma, double rate, double dividend,
                          std::span<const double> strikes) {
    OtmSurface s;
    s.strikes.assign(strikes.begin(), strikes.end());
    s.price = [=](double k, double t) {
        const double fwd = spot * std::exp((rate - dividend) * t);
        const OptionType type = (k < fwd) ? OptionType::put : OptionType::call;
        // undiscounted
        return std::exp(rate * t) * bs_price(spot, k, t, rate, dividend, sigma, type);
    };
    return s;
}

PutSurface bs_put_surface(double spot, double sigma, double rate, double dividend,
                          std::span<const double> strikes, std::span<const double> maturities) {
    PutSurface s;
    s.strikes.assign(strikes.begin(), strikes.end());
    s.maturities.assign(maturities.begin(), maturities.end());
    s.price = [=](double k, double t) {
        if (t <= 0.0) return std::max(k - spot, 0.0);
        return std::exp(rate * t) * bs_price(spot, k, t, rate, dividend, sigma, OptionType::put);
    };
    return s;
}

double bl_occupation_strike(const OtmSurface& surface, double x1, double x2, double maturity) {
    if (!(x1 <= x2)) throw domain_error("bl_occupation_strike: corridor bounds out of order");
    if (x1 == x2) return 0.0;
    const auto& ks = surface.strikes;
    if (ks.size() < 2) throw config_error("bl_occupation_strike: strike grid too small");
    if (x1 < ks.front() || x2 > ks.back())
        throw domain_error("bl_occupation_strike: corridor outside quoted strikes");

    auto integrand = [&](double k) { return 2.0 * surface.price(k, maturity) / (k * k); };

    // quadrature nodes: corridor ends plus the quote-grid strikes inside
    std::vector<double> nodes;
    nodes.push_back(x1);
    for (double k : ks)
        if (k > x1 && k < x2) nodes.push_back(k);
    nodes.push_back(x2);

    double sum = 0.0;
    double f_prev = integrand(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double f = integrand(nodes[i]);
        sum += 0.5 * (f_prev + f) * (nodes[i] - nodes[i - 1]);
        f_prev = f;
    }
    return sum;
}

namespace {

// d_K P(x, t) by central differences on the strike grid; infinite corridor
// ends use the exact undiscounted slopes.
double put_slope(const PutSurface& surface, double x, double t) {
    if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
    const auto& ks = surface.strikes;
    if (ks.size() < 3) throw domain_error("range_accrual_static: fewer than 3 strikes");
    if (x < ks.front() || x > ks.back())
        throw domain_error("range_accrual_static: corridor bound outside quoted strikes");
    const auto it = std::lower_bound(ks.begin(), ks.end(), x);
    std::size_t i = static_cast<std::size_t>(it - ks.begin());
    i = std::clamp<std::size_t>(i, 1, ks.size() - 2);
    const double h_lo = ks[i] - ks[i - 1];
    const double h_hi = ks[i + 1] - ks[i];
    const double h = std::min(h_lo, h_hi);
    return (surface.price(x + h, t) - surface.price(x - h, t)) / (2.0 * h);
}

}  // namespace

double range_accrual_static(const PutSurface& surface, double x1, double x2, double maturity) {
    if (!(x1 < x2)) throw domain_error("range_accrual_static: corridor bounds out of order");
    if (surface.maturities.empty() || surface.maturities.back() < maturity)
        throw domain_error("range_accrual_static: maturities do not span [0, T]");

    // trapezoid nodes: quoted maturities clipped to [0, T], with 0 and T added
    std::vector<double> ts;
    ts.push_back(0.0);
    for (double t : surface.maturities)
        if (t > 0.0 && t < maturity) ts.push_back(t);
    ts.push_back(maturity);

    auto occupancy = [&](double t) {
        return put_slope(surface, x2, t) - put_slope(surface, x1, t);
    };

    double sum = 0.0;
    double f_prev = occupancy(ts[0]);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double f = occupancy(ts[i]);
        sum += 0.5 * (f_prev + f) * (ts[i] - ts[i - 1]);
        f_prev = f;
    }
    return sum;
}

}  // namespace occflow
