#pragma once

#include <functional>
#include <span>
#include <vector>

namespace occflow {

// Out-of-the-money price surface on a strike grid: put below the forward,
// call at or above it. Prices are undiscounted.
struct OtmSurface {
    std::vector<double> strikes;  // sorted quadrature grid
    std::function<double(double strike, double maturity)> price;
};

// Undiscounted put price surface P(K, t) = E[(K - X_t)^+] on strike and
// maturity grids.
struct PutSurface {
    std::vector<double> strikes;
    std::vector<double> maturities;
    std::function<double(double strike, double maturity)> price;
};

// Synthetic Black-Scholes surfaces (flat vol, undiscounted) for tests and the
// replicate CLI demo.
OtmSurface bs_otm_surface(double spot, double sigma, double rate, double dividend,
                          std::span<const double> strikes);
PutSurface bs_put_surface(double spot, double sigma, double rate, double dividend,
                          std::span<const double> strikes, std::span<const double> maturities);

// Expected quadratic-clock occupation of the corridor [x1, x2] at maturity T,
// statically replicated as 2 * integral of OTM(K,T)/K^2 dK over the corridor
// (composite trapezoid on the quote grid). The corridor must lie inside the
// quoted strike range.
double bl_occupation_strike(const OtmSurface& surface, double x1, double x2, double maturity);

// Expected calendar occupation of [x1, x2] up to T from the put surface:
// integral over t of (d_K P(x2,t) - d_K P(x1,t)), central differences in K and
// trapezoid in t. Corridor ends of +-infinity use the analytic slopes 1 and 0.
double range_accrual_static(const PutSurface& surface, double x1, double x2, double maturity);

}  // namespace occflow
