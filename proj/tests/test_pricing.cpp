#include "occflow/black_scholes.hpp"
#include "occflow/calibration.hpp"
#include "occflow/errors.hpp"
#include "occflow/normal.hpp"
#include "occflow/payoffs.hpp"
#include "occflow/pricing.hpp"

#include <doctest.h>

#include <cmath>

using namespace occflow;

namespace {

OccupiedPath constant_path(GridPtr grid, double level, double horizon, std::size_t steps) {
    OccupiedPath p{level, DiscreteOccupation(grid, level), {}, {}, {}};
    const double dt = horizon / steps;
    for (std::size_t n = 0; n < steps; ++n) p.occupation.accumulate(level, dt);
    return p;
}

SimConfig gbm_config(Clock clock, std::size_t paths = 4096, std::size_t steps = 64) {
    SimConfig cfg;
    cfg.horizon = 1.0;
    cfg.n_steps = steps;
    cfg.n_paths = paths;
    cfg.seed = 21;
    cfg.x0 = 100.0;
    cfg.clock = clock;
    cfg.grid = make_grid(100.0, 80.0, 201);
    return cfg;
}

}  // namespace

TEST_CASE("payoff examples on deterministic paths") {
    auto grid = make_grid(100.0, 80.0, 201);
    const OccupiedPath flat = constant_path(grid, 100.0, 1.0, 64);
    CHECK(evaluate_payoff(AsianFloatingCall{}, flat) == doctest::Approx(0.0).epsilon(1e-14));

    // strictly increasing path: lookback pays X_T - X_0
    OccupiedPath up{0.0, DiscreteOccupation(grid, 90.0), {}, {}, {}};
    for (int n = 0; n < 64; ++n) up.occupation.accumulate(90.0 + 0.3 * n, 1.0 / 64);
    up.terminal_level = 90.0 + 0.3 * 64;
    CHECK(evaluate_payoff(LookbackFloatingCall{}, up) == doctest::Approx(up.terminal_level - 90.0));

    // Parisian: zero time above the barrier pays the asset, long time pays nothing
    CHECK(evaluate_payoff(ParisianUpOutAssetOrNothing{120.0, 0.25}, flat) == 100.0);
    CHECK(evaluate_payoff(ParisianUpOutAssetOrNothing{95.0, 0.25}, flat) == 0.0);
    // knock-out value is nonincreasing in window occupancy
    double prev = 1e9;
    for (double barrier : {101.0, 99.0}) {  // occupancy 0.0 then 1.0
        const double v = evaluate_payoff(ParisianUpOutAssetOrNothing{barrier, 0.25}, flat);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("mc_price exact cases") {
    SUBCASE("zero volatility call") {
        SimConfig cfg = gbm_config(Clock::calendar(), 64, 16);
        cfg.rate = 0.03;
        cfg.dividend = 0.01;
        const auto ens = euler_occupied(cfg, constant_vol(0.0));
        const auto est = mc_price(PayoffSpec{VanillaCall{95.0}}, ens, cfg.rate, cfg.horizon);
        const double fwd = cfg.x0 * std::exp((cfg.rate - cfg.dividend) * cfg.horizon);
        CHECK(est.value ==
              doctest::Approx(std::exp(-cfg.rate * cfg.horizon) * (fwd - 95.0)).epsilon(1e-12));
        CHECK(est.stderror == doctest::Approx(0.0));
    }
    SUBCASE("full-corridor range accrual pays the discounted coupon exactly") {
        SimConfig cfg = gbm_config(Clock::calendar(), 64, 16);
        cfg.rate = 0.05;
        const auto ens = euler_occupied(cfg, constant_vol(0.2));
        const double inf = std::numeric_limits<double>::infinity();
        const auto est =
            mc_price(PayoffSpec{RangeAccrual{-inf, inf, 2.5}}, ens, cfg.rate, cfg.horizon);
        CHECK(est.value == doctest::Approx(std::exp(-0.05) * 2.5).epsilon(1e-12));
    }
    SUBCASE("vanilla call against Black-Scholes") {
        SimConfig cfg = gbm_config(Clock::calendar(), 1 << 13, 16);
        cfg.rate = 0.02;
        const auto ens = euler_occupied(cfg, constant_vol(0.2));
        const auto est = mc_price(PayoffSpec{VanillaCall{100.0}}, ens, cfg.rate, cfg.horizon);
        const double ref = bs_price(100.0, 100.0, 1.0, 0.02, 0.0, 0.2, OptionType::call);
        CHECK(std::abs(est.value - ref) <= 3.0 * est.stderror);
    }
    SUBCASE("clock mismatch and empty ensemble") {
        SimConfig cfg = gbm_config(Clock::calendar(), 8, 4);
        const auto ens = euler_occupied(cfg, constant_vol(0.2));
        CHECK_THROWS_AS(mc_price(PayoffSpec{CorridorVarFloatingLeg{90.0, 110.0}}, ens, 0.0, 1.0),
                        config_error);
        PathEnsemble empty;
        CHECK_THROWS_AS(mc_price(PayoffSpec{VanillaCall{1.0}}, empty, 0.0, 1.0), domain_error);
    }
}

TEST_CASE("call prices are nonincreasing in strike per ensemble") {
    SimConfig cfg = gbm_config(Clock::calendar(), 2048, 16);
    const auto ens = euler_occupied(cfg, constant_vol(0.25));
    double prev = 1e18;
    for (double k : {60.0, 80.0, 100.0, 120.0, 140.0}) {
        const double v = mc_price(PayoffSpec{VanillaCall{k}}, ens, 0.0, 1.0).value;
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("asian and lookback equivalences against the direct path loop") {
    SimConfig cfg = gbm_config(Clock::calendar(), 128, 64);
    cfg.store_paths = true;
    const auto ens = euler_occupied(cfg, constant_vol(0.3));
    for (const auto& p : ens.paths) {
        double avg = 0.0, lo = p.levels[0];
        for (std::size_t n = 0; n < cfg.n_steps; ++n) {
            avg += p.levels[n] * cfg.dt();
            lo = std::min(lo, p.levels[n]);
        }
        avg /= cfg.horizon;
        const double asian = evaluate_payoff(AsianFloatingCall{}, p);
        REQUIRE(std::abs(asian - std::max(p.terminal_level - avg, 0.0)) <=
                1e-12 * std::max(1.0, std::abs(asian)));
        const double lkbk = evaluate_payoff(LookbackFloatingCall{}, p);
        REQUIRE(lkbk == std::max(p.terminal_level - std::min(lo, p.terminal_level), 0.0));
    }
}

TEST_CASE("corridor variance strikes") {
    SUBCASE("full corridor recovers the constant variance exactly") {
        SimConfig cfg = gbm_config(Clock::quadratic_variation(), 512, 32);
        const auto ens = euler_occupied(cfg, constant_vol(0.2));
        const double inf = std::numeric_limits<double>::infinity();
        const auto est = corridor_var_strike_mc(-inf, inf, ens, cfg.horizon);
        CHECK(est.value == doctest::Approx(0.04).epsilon(1e-12));
        CHECK(corridor_var_strike_mc(50.0, 50.0, ens, cfg.horizon).value == 0.0);
    }
    SUBCASE("disjoint aligned corridors add exactly") {
        SimConfig cfg = gbm_config(Clock::quadratic_variation(), 512, 64);
        const auto ens = euler_occupied(cfg, constant_vol(0.2));
        // corridor bounds on bin edges so the pro-rated fractions are 0/1
        const auto& g = *cfg.grid;
        const double a = g.left_edge(40), b = g.left_edge(100), c = g.left_edge(160);
        const double v1 = corridor_var_strike_mc(a, b, ens, 1.0).value;
        const double v2 = corridor_var_strike_mc(b, c, ens, 1.0).value;
        const double v12 = corridor_var_strike_mc(a, c, ens, 1.0).value;
        CHECK(v12 == doctest::Approx(v1 + v2).epsilon(1e-13));
    }
    SUBCASE("calendar ensemble is rejected") {
        SimConfig cfg = gbm_config(Clock::calendar(), 8, 4);
        const auto ens = euler_occupied(cfg, constant_vol(0.2));
        CHECK_THROWS_AS(corridor_var_strike_mc(90.0, 110.0, ens, 1.0), config_error);
    }
}

TEST_CASE("narrow corridor strike matches the heat-kernel local time oracle") {
    // Brownian-like: unit vol on an arithmetic path, via occupation_from_path
    const std::size_t N = 512, J = 1 << 12;
    SimConfig cfg;
    cfg.horizon = 1.0;
    cfg.n_steps = N;
    cfg.n_paths = J;
    cfg.seed = 3;
    cfg.x0 = 0.0;
    const auto paths = simulate_bm(cfg);
    auto grid = make_grid(0.0, 4.0, 801);

    const double level = 0.3, eps = 0.05;
    double mean = 0.0, m2 = 0.0;
    for (const auto& p : paths) {
        DiscreteOccupation occ(grid, 0.0);
        for (std::size_t n = 0; n < N; ++n) occ.accumulate(p[n], cfg.dt());
        const double v = occ.mass_in(level - eps, level + eps) / cfg.horizon;
        mean += v;
        m2 += v * v;
    }
    mean /= J;
    const double se = std::sqrt((m2 / J - mean * mean) / J);

    // E[L_T^k] = int_0^T phi_s(k) ds via Simpson after s = u^2
    const std::size_t Q = 4000;
    const double du = 1.0 / Q;
    auto f = [&](double u) { return std::sqrt(2.0 / M_PI) * std::exp(-level * level / (2 * u * u)); };
    double integral = 0.0;
    for (std::size_t i = 0; i < Q; ++i)
        integral += du / 6.0 * (f(i * du) + 4.0 * f((i + 0.5) * du) + f((i + 1) * du));
    const double oracle = 2.0 * eps * integral / cfg.horizon;
    CHECK(std::abs(mean - oracle) <= 3.0 * se + 1e-3);
}

TEST_CASE("timer exercise") {
    auto grid = make_grid(100.0, 80.0, 201);
    SUBCASE("horizon fallback is counted") {
        SimConfig cfg = gbm_config(Clock::quadratic_variation(), 64, 32);
        cfg.store_paths = true;
        const auto ens = euler_occupied(cfg, constant_vol(0.1));  // variance 0.01 < budget
        const auto tp = timer_price_mc(TimerCall{0.5, 100.0}, ens);
        CHECK(tp.budget_not_reached == ens.size());
    }
    SUBCASE("zero strike pays the initial level in expectation") {
        SimConfig cfg = gbm_config(Clock::quadratic_variation(), 1 << 12, 128);
        cfg.store_paths = true;
        const auto ens = euler_occupied(cfg, constant_vol(0.25));
        const auto tp = timer_price_mc(TimerCall{0.04, 1e-12}, ens);
        CHECK(std::abs(tp.estimate.value - cfg.x0) <= 3.0 * tp.estimate.stderror);
        CHECK(tp.budget_not_reached == 0);
    }
    SUBCASE("missing vol record") {
        OccupiedPath p{100.0, DiscreteOccupation(grid), {}, {}, {}};
        CHECK_THROWS_AS(timer_exercise(TimerCall{0.1, 100.0}, p), config_error);
    }
}

TEST_CASE("black-scholes utilities") {
    const double s0 = 100.0, t = 0.75, r = 0.03, q = 0.01;
    SUBCASE("implied vol round trip") {
        for (double sigma : {0.05, 0.2, 1.0}) {
            const double px = bs_price(s0, 110.0, t, r, q, sigma, OptionType::call);
            CHECK(implied_vol(px, s0, 110.0, t, r, q, OptionType::call) ==
                  doctest::Approx(sigma).epsilon(1e-8));
            const double pp = bs_price(s0, 90.0, t, r, q, sigma, OptionType::put);
            CHECK(implied_vol(pp, s0, 90.0, t, r, q, OptionType::put) ==
                  doctest::Approx(sigma).epsilon(1e-8));
        }
    }
    SUBCASE("at-the-money-forward approximation, driftless") {
        for (double sigma : {0.05, 0.1, 0.2}) {
            const double exact = bs_price(s0, s0, 1.0, 0.0, 0.0, sigma, OptionType::call);
            const double approx = 0.4 * s0 * sigma;
            CHECK(std::abs(approx - exact) <= 0.01 * exact);
        }
    }
    SUBCASE("small strike limit") {
        const double px = bs_price(s0, 1e-12, t, r, q, 0.2, OptionType::call);
        CHECK(px == doctest::Approx(std::exp(-q * t) * s0 - std::exp(-r * t) * 1e-12));
    }
    SUBCASE("vega matches a finite difference") {
        const double h = 1e-5;
        const double fd = (bs_price(s0, 105.0, t, r, q, 0.2 + h, OptionType::call) -
                           bs_price(s0, 105.0, t, r, q, 0.2 - h, OptionType::call)) /
                          (2 * h);
        CHECK(bs_vega(s0, 105.0, t, r, q, 0.2) == doctest::Approx(fd).epsilon(1e-6));
    }
    SUBCASE("price outside the band has no implied vol") {
        CHECK_THROWS_AS(implied_vol(s0 * 2.0, s0, 100.0, t, r, q, OptionType::call),
                        numeric_error);
        CHECK_THROWS_AS(implied_vol(-0.01, s0, 100.0, t, r, q, OptionType::call), numeric_error);
    }
}

TEST_CASE("calibration loss") {
    const MarketConvention mkt{100.0, 0.0, 0.0};
    const std::vector<double> strikes{90.0, 100.0, 110.0};
    const std::vector<double> mats{1.0};
    const auto quotes = synthetic_bs_quotes(mkt, strikes, mats, 0.2, 0.02);

    SUBCASE("model at mid gives zero loss") {
        std::vector<double> model(quotes.size());
        for (std::size_t i = 0; i < quotes.size(); ++i) model[i] = quotes[i].mid();
        const auto loss = calibration_loss(model, quotes, mkt);
        CHECK(loss.loss == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(loss.threshold > 0.0);
    }
    SUBCASE("model at bid sits exactly on the threshold") {
        std::vector<double> model(quotes.size());
        for (std::size_t i = 0; i < quotes.size(); ++i) model[i] = quotes[i].bid;
        const auto loss = calibration_loss(model, quotes, mkt);
        CHECK(loss.loss == doctest::Approx(loss.threshold).epsilon(1e-12));
    }
    SUBCASE("hand-computed three-instrument oracle") {
        std::vector<double> model(quotes.size());
        for (std::size_t i = 0; i < quotes.size(); ++i) model[i] = quotes[i].mid() + 0.10;
        const auto loss = calibration_loss(model, quotes, mkt);
        // independent arithmetic: w_i = (vega_i v 1e-2)^{-1} sig_bid/sig_ask, err = 0.10 w_i
        double acc = 0.0;
        for (const QuoteRow& qr : quotes) {
            const double sb = implied_vol(qr.bid, 100.0, qr.strike, 1.0, 0.0, 0.0, qr.type);
            const double sa = implied_vol(qr.ask, 100.0, qr.strike, 1.0, 0.0, 0.0, qr.type);
            const double sm = implied_vol(qr.mid(), 100.0, qr.strike, 1.0, 0.0, 0.0, qr.type);
            const double w = (sb / sa) / std::max(bs_vega(100.0, qr.strike, 1.0, 0.0, 0.0, sm), 1e-2);
            acc += (0.10 * w) * (0.10 * w);
        }
        CHECK(loss.loss == doctest::Approx(std::sqrt(acc / quotes.size())).epsilon(1e-9));
    }
    SUBCASE("count mismatch") {
        CHECK_THROWS_AS(calibration_loss(std::vector<double>{1.0}, quotes, mkt), dimension_error);
    }
}

TEST_CASE("quote csv round trip") {
    const MarketConvention mkt{100.0, 0.01, 0.0};
    const std::vector<double> strikes{95.0, 105.0};
    const std::vector<double> mats{0.5, 1.0};
    const auto quotes = synthetic_bs_quotes(mkt, strikes, mats, 0.25, 0.01);
    const std::string path = "/tmp/occflow_quotes_test.csv";
    write_quotes_csv(path, quotes);
    const auto back = read_quotes_csv(path);
    REQUIRE(back.size() == quotes.size());
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        CHECK(back[i].strike == quotes[i].strike);
        CHECK(back[i].bid == doctest::Approx(quotes[i].bid).epsilon(1e-10));
        CHECK(back[i].type == quotes[i].type);
    }
}
