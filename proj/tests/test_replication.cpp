#include "occflow/errors.hpp"
#include "occflow/normal.hpp"
#include "occflow/replication.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace occflow;

namespace {

std::vector<double> log_strikes(double spot, double sigma, double maturity, double width_sd,
                                std::size_t n) {
    std::vector<double> ks(n);
    const double span = width_sd * sigma * std::sqrt(maturity);
    for (std::size_t i = 0; i < n; ++i)
        ks[i] = spot * std::exp(-span + 2.0 * span * static_cast<double>(i) / (n - 1));
    return ks;
}

}  // namespace

TEST_CASE("wide-corridor occupation strike recovers the total variance") {
    const double s0 = 100.0, sigma = 0.2, T = 1.0;
    const auto ks = log_strikes(s0, sigma, T, 8.0, 1601);
    const auto surface = bs_otm_surface(s0, sigma, 0.0, 0.0, ks);
    const double value = bl_occupation_strike(surface, ks.front(), ks.back(), T);
    CHECK(value == doctest::Approx(sigma * sigma * T).epsilon(1e-3));

    CHECK(bl_occupation_strike(surface, 100.0, 100.0, T) == 0.0);
    CHECK_THROWS_AS(bl_occupation_strike(surface, 0.01, 110.0, T), domain_error);
}

TEST_CASE("corridor occupation strike equals the local-time integral oracle") {
    // finite corridor: 2 int OTM/K^2 dK = int_A E[Lambda_T^K]/K^2 dK with
    // E[Lambda^K] from the undiscounted option prices themselves; instead of
    // MC (covered in the acceptance suite) compare against fine-grid Simpson
    const double s0 = 100.0, sigma = 0.25, T = 0.5;
    const auto ks = log_strikes(s0, sigma, T, 8.0, 2001);
    const auto surface = bs_otm_surface(s0, sigma, 0.0, 0.0, ks);
    const double a = 90.0, b = 111.0;
    const double coarse = bl_occupation_strike(surface, a, b, T);

    double fine = 0.0;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
        const double k0 = a + (b - a) * i / static_cast<double>(n);
        const double k1 = a + (b - a) * (i + 1) / static_cast<double>(n);
        const double km = 0.5 * (k0 + k1);
        auto f = [&](double k) { return 2.0 * surface.price(k, T) / (k * k); };
        fine += (k1 - k0) / 6.0 * (f(k0) + 4.0 * f(km) + f(k1));
    }
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-5));
}

TEST_CASE("range accrual statics") {
    const double s0 = 100.0, sigma = 0.2, T = 1.0;
    const auto ks = log_strikes(s0, sigma, T, 8.0, 801);
    std::vector<double> mats;
    for (int i = 0; i <= 400; ++i) mats.push_back(T * i / 400.0);
    const auto surface = bs_put_surface(s0, sigma, 0.0, 0.0, ks, mats);
    const double inf = std::numeric_limits<double>::infinity();

    SUBCASE("full corridor accrues the whole horizon") {
        CHECK(range_accrual_static(surface, -inf, inf, T) == doctest::Approx(T));
    }
    SUBCASE("zero-volatility surface with the corridor containing the path") {
        const auto flat = bs_put_surface(s0, 1e-8, 0.0, 0.0, ks, mats);
        const double v = range_accrual_static(flat, 90.0, 110.0, T);
        CHECK(v == doctest::Approx(T).epsilon(1e-6));
    }
    SUBCASE("one-sided corridor matches the analytic occupancy integral") {
        const double barrier = 0.95 * s0;
        const double value = range_accrual_static(surface, barrier, inf, T);
        // int_0^T P(X_t > barrier) dt with X_t = s0 exp(-s^2 t/2 + s W_t)
        double exact = 0.0;
        const std::size_t n = 20000;
        auto p_above = [&](double t) {
            if (t <= 0.0) return 1.0;
            const double d = (std::log(s0 / barrier) - 0.5 * sigma * sigma * t) /
                             (sigma * std::sqrt(t));
            return norm_cdf(d);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const double t0 = T * i / n, t1 = T * (i + 1) / n;
            exact += (t1 - t0) / 6.0 * (p_above(t0) + 4.0 * p_above(0.5 * (t0 + t1)) + p_above(t1));
        }
        CHECK(value == doctest::Approx(exact).epsilon(2e-3));
    }
    SUBCASE("corridor outside the quoted strikes") {
        CHECK_THROWS_AS(range_accrual_static(surface, 1.0, inf, T), domain_error);
    }
    SUBCASE("maturities must span the horizon") {
        const auto shorty = bs_put_surface(s0, sigma, 0.0, 0.0, ks, std::vector<double>{0.25});
        CHECK_THROWS_AS(range_accrual_static(shorty, 90.0, inf, T), domain_error);
    }
}
