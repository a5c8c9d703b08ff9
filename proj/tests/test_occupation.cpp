#include "occflow/errors.hpp"
#include "occflow/occupation.hpp"
#include "occflow/path_transform.hpp"
#include "occflow/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace occflow;

namespace {

// Random piecewise-constant level sequence on a dyadic time grid.
std::vector<double> random_levels(const CounterRng& rng, std::uint64_t path, std::size_t n,
                                  double scale) {
    std::vector<double> x(n);
    double cur = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cur += scale * rng.normal(path, i);
        x[i] = cur;
    }
    return x;
}

}  // namespace

TEST_CASE("make_grid places equally spaced nodes") {
    auto g = make_grid(100.0, 50.0, 101);
    CHECK(g->size() == 101);
    CHECK(g->node(0) == doctest::Approx(50.0));
    CHECK(g->node(100) == doctest::Approx(150.0));
    CHECK(g->node(51) - g->node(50) == doctest::Approx(1.0));

    auto single = make_grid(0.0, 2.0, 1);
    CHECK(single->size() == 1);
    CHECK(single->bin_of(-100.0) == 0);
    CHECK(single->bin_of(100.0) == 0);

    auto fine = make_grid(0.0, 2.0, 201);
    CHECK(fine->node(101) == doctest::Approx(0.02));
    CHECK(fine->bin_of(0.011) == 101);

    CHECK_THROWS_AS(make_grid(0.0, -1.0, 3), config_error);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 4), config_error);
}

TEST_CASE("bin lookup is total and half-open") {
    auto g = make_grid(0.0, 2.0, 5);  // nodes -2..2, spacing 1, edges at +-0.5, +-1.5
    CHECK(g->bin_of(0.5) == 3);       // boundary goes right
    CHECK(g->bin_of(0.49) == 2);
    CHECK(g->bin_of(-7.0) == 0);  // clamped to edge bins
    CHECK(g->bin_of(9.0) == 4);
    // non-uniform grid takes the search path
    CorridorGrid nu({0.0, 1.0, 3.0}, 0.5, 1.0);
    CHECK(nu.bin_of(0.5) == 1);
    CHECK(nu.bin_of(0.49) == 0);
    CHECK(nu.bin_of(2.0) == 2);
    CHECK(nu.bin_of(100.0) == 2);
}

TEST_CASE("accumulate: Dirac path fills one bin") {
    auto g = make_grid(0.0, 2.0, 5);
    DiscreteOccupation occ(g);
    const std::size_t n = 512;
    const double dt = 1.0 / n;
    for (std::size_t i = 0; i < n; ++i) occ.accumulate(1.0, dt);
    CHECK(occ.mass(g->bin_of(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(occ.total_mass() == doctest::Approx(1.0).epsilon(1e-14));

    const double before = occ.total_mass();
    occ.accumulate(-1.5, 0.0);  // zero weight is a no-op
    CHECK(occ.total_mass() == before);
    CHECK(occ.support_bounds() == std::pair<double, double>{1.0, 1.0});

    CHECK_THROWS_AS(occ.accumulate(0.0, -1e-9), domain_error);
}

TEST_CASE("exponential clock accumulates the analytic integral") {
    auto g = make_grid(0.0, 2.0, 5);
    const double kappa = 3.0, T = 1.0;
    const std::size_t n = 4096;
    const double dt = T / n;
    DiscreteOccupation occ(g);
    Clock clock = Clock::exponential(kappa);
    for (std::size_t i = 0; i < n; ++i) occ.accumulate(0.25, clock.increment(i * dt, dt));
    const double exact = (std::exp(kappa * T) - 1.0) / kappa;
    CHECK(occ.total_mass() == doctest::Approx(exact).epsilon(20.0 * dt));
}

TEST_CASE("occupation_from_path equals a brute-force loop") {
    auto g = make_grid(0.0, 3.0, 31);
    const CounterRng rng(11);
    const std::size_t n = 257;
    std::vector<double> times(n), levels = random_levels(rng, 0, n, 0.1);
    for (std::size_t i = 0; i < n; ++i) times[i] = i * (2.0 / (n - 1));

    SUBCASE("calendar") {
        auto occ = occupation_from_path(times, levels, Clock::calendar(), g);
        DiscreteOccupation brute(g, levels[0]);
        for (std::size_t i = 0; i + 1 < n; ++i) brute.accumulate(levels[i], times[i + 1] - times[i]);
        CHECK(metric(occ, brute, MetricOrder::tv) == 0.0);
        CHECK(occ.total_mass() == brute.total_mass());
        CHECK(occ.first_moment() == brute.first_moment());
    }
    SUBCASE("quadratic pairs step variance with the arrival level") {
        std::vector<double> vols(n - 1, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) vols[i] = 0.1 + 0.05 * (i % 7);
        auto occ = occupation_from_path(times, levels, Clock::quadratic_variation(), g, vols);
        DiscreteOccupation brute(g, levels[0]);
        for (std::size_t i = 0; i + 1 < n; ++i)
            brute.accumulate(levels[i + 1], vols[i] * vols[i] * (times[i + 1] - times[i]));
        CHECK(metric(occ, brute, MetricOrder::tv) == 0.0);
        CHECK_THROWS_AS(occupation_from_path(times, levels, Clock::quadratic_variation(), g,
                                             std::vector<double>(3)),
                        dimension_error);
    }
}

TEST_CASE("local_time with corridor covering one bin") {
    auto g = make_grid(0.0, 2.0, 5);  // bin width 1
    DiscreteOccupation occ(g);
    for (int i = 0; i < 100; ++i) occ.accumulate(1.0, 0.01);
    const double eps = 0.5;  // exactly the bin of node 1
    CHECK(occ.local_time(1.0, eps) == doctest::Approx(1.0 / (2 * eps)).epsilon(1e-12));

    DiscreteOccupation empty(g);
    CHECK(empty.local_time(0.0, 0.1) == 0.0);
    CHECK_THROWS_AS(occ.local_time(0.0, 0.0), domain_error);
    CHECK(spot_local_time(occ, 1.0, eps) == occ.local_time(1.0, eps));
}

TEST_CASE("2 eps x local_time is nondecreasing in eps and bounded by total mass") {
    auto g = make_grid(0.0, 1.0, 101);
    const CounterRng rng(5);
    DiscreteOccupation occ(g);
    for (int i = 0; i < 300; ++i) occ.accumulate(0.5 * rng.normal(1, i), 1.0 / 300);
    double prev = 0.0;
    for (double eps : {0.01, 0.02, 0.05, 0.1, 0.3, 1.0, 3.0}) {
        const double cov = 2 * eps * occ.local_time(0.1, eps);
        CHECK(cov >= prev - 1e-15);
        CHECK(cov <= occ.total_mass() * (1 + 1e-12));
        prev = cov;
    }
}

TEST_CASE("occupation_integral uses exact accumulators") {
    auto g = make_grid(0.0, 2.0, 5);
    const CounterRng rng(7);
    DiscreteOccupation occ(g);
    const std::size_t n = 200;
    std::vector<double> levels(n), weights(n);
    double direct_mass = 0.0, direct_first = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        levels[i] = 2.5 * rng.normal(2, i);
        weights[i] = 1.0 / n;
        occ.accumulate(levels[i], weights[i]);
        direct_mass += weights[i];
        direct_first += levels[i] * weights[i];
    }
    CHECK(occupation_integral(occ, LevelFn::constant(1.0)) == occ.total_mass());
    CHECK(occupation_integral(occ, LevelFn::identity()) == direct_first);  // same fold order
    // indicator of one bin recovers that bin's mass
    const std::size_t target = 2;
    auto ind = LevelFn::of([&](double x) { return occ.grid().bin_of(x) == target ? 1.0 : 0.0; });
    CHECK(occupation_integral(occ, ind) == doctest::Approx(occ.mass(target)).epsilon(1e-13));
}

TEST_CASE("metric examples") {
    auto g = make_grid(0.0, 2.0, 5);
    DiscreteOccupation a(g), b(g);
    a.accumulate(-1.0, 0.3);
    b.accumulate(1.0, 0.4);
    CHECK(metric(a, a, MetricOrder::tv) == 0.0);
    CHECK(metric(a, a, MetricOrder::sup_density) == 0.0);
    CHECK(metric(a, b, MetricOrder::tv) == doctest::Approx(0.7));
    CHECK(metric(a, b, MetricOrder::sup_density) == doctest::Approx(0.4));  // bin width 1

    // nested occupations: m1 is the total-mass difference
    DiscreteOccupation s(g), t(g);
    const CounterRng rng(3);
    for (int i = 0; i < 64; ++i) {
        const double x = rng.normal(0, i);
        s.accumulate(x, 1.0 / 128);
        t.accumulate(x, 1.0 / 128);
    }
    for (int i = 64; i < 128; ++i) t.accumulate(rng.normal(0, i), 1.0 / 128);
    CHECK(metric(s, t, MetricOrder::tv) ==
          doctest::Approx(t.total_mass() - s.total_mass()).epsilon(1e-12));

    DiscreteOccupation other(make_grid(0.0, 2.0, 7));
    CHECK_THROWS_AS(metric(a, other, MetricOrder::tv), dimension_error);
}

TEST_CASE("support_bounds tracks exact levels") {
    auto g = make_grid(0.0, 2.0, 5);
    DiscreteOccupation occ(g);
    for (double x : {1.0, 3.0, -2.0}) occ.accumulate(x, 0.1);
    CHECK(occ.support_bounds() == std::pair<double, double>{-2.0, 3.0});

    DiscreteOccupation empty(g);
    CHECK_THROWS_AS(empty.support_bounds(), empty_support_error);
    DiscreteOccupation seeded(g, 0.7);  // starting level seeds the range
    CHECK(seeded.support_bounds() == std::pair<double, double>{0.7, 0.7});
}

TEST_CASE("shuffle_path block permutation") {
    const std::vector<double> path{1, 2, 3, 4, 5, 6, 7, 8};
    SUBCASE("identity") {
        TimePermutation id{{0, 1, 2, 3}, {1, 1, 1, 1}};
        CHECK(shuffle_path(path, id) == path);
    }
    SUBCASE("reorder and reverse") {
        // output block 1 = input block 3 reversed, 2 = 2, 3 = 4, 4 = 1 reversed
        TimePermutation perm{{2, 1, 3, 0}, {-1, 1, 1, -1}};
        CHECK(shuffle_path(path, perm) == std::vector<double>{6, 5, 3, 4, 7, 8, 2, 1});
    }
    SUBCASE("inverse recovers the path") {
        TimePermutation perm{{2, 0, 3, 1}, {-1, 1, -1, 1}};
        const auto shuffled = shuffle_path(path, perm);
        CHECK(shuffle_path(shuffled, perm.inverse()) == path);
    }
    SUBCASE("errors") {
        TimePermutation bad{{0, 0, 1}, {1, 1, 1}};
        CHECK_THROWS_AS(shuffle_path(path, bad), domain_error);
        TimePermutation three{{0, 1, 2}, {1, 1, 1}};
        CHECK_THROWS_AS(shuffle_path(path, three), dimension_error);  // 8 % 3 != 0
    }
}

TEST_CASE("chronology invariance: shuffled paths share the calendar occupation") {
    auto g = make_grid(0.0, 3.0, 61);
    const CounterRng rng(17);
    const double dt = 1.0 / 256;  // dyadic: bin sums are exact rearrangements
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const std::size_t n_blocks = 2 + static_cast<std::size_t>(6 * rng.uniform(trial, 1000));
        const std::size_t block = 1 + static_cast<std::size_t>(9 * rng.uniform(trial, 1001));
        const auto levels = random_levels(rng, trial, n_blocks * block, 0.2);

        TimePermutation perm;
        perm.sigma.resize(n_blocks);
        perm.sign.resize(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            perm.sigma[b] = b;
            perm.sign[b] = rng.uniform(trial, 2000 + b) < 0.5 ? -1 : 1;
        }
        for (std::size_t b = n_blocks; b > 1; --b)
            std::swap(perm.sigma[b - 1],
                      perm.sigma[static_cast<std::size_t>(b * rng.uniform(trial, 3000 + b))]);

        const auto shuffled = shuffle_path(levels, perm);
        const auto occ_a = calendar_occupation(levels, dt, g);
        const auto occ_b = calendar_occupation(shuffled, dt, g);
        REQUIRE(metric(occ_a, occ_b, MetricOrder::tv) == 0.0);
        REQUIRE(occ_a.total_mass() == occ_b.total_mass());
    }
}

TEST_CASE("mass conservation and monotone masses under accumulation") {
    auto g = make_grid(0.0, 2.0, 41);
    const CounterRng rng(23);
    DiscreteOccupation occ(g);
    double prev_total = 0.0;
    for (int i = 0; i < 2000; ++i) {
        occ.accumulate(1.5 * rng.normal(0, i), 0.001 * (1.0 + rng.uniform(1, i)));
        CHECK(occ.total_mass() >= prev_total);
        prev_total = occ.total_mass();
    }
    double sum = 0.0;
    for (double m : occ.masses()) sum += m;
    CHECK(std::abs(sum - occ.total_mass()) <= 1e-12 * occ.total_mass());
}

TEST_CASE("time additivity: merge of split halves equals the one-pass measure") {
    auto g = make_grid(0.0, 2.0, 21);
    const CounterRng rng(31);
    const double dt = 1.0 / 512;  // dyadic weights make the split exact
    const auto levels = random_levels(rng, 9, 512, 0.15);

    for (std::size_t split : {1ul, 100ul, 256ul, 511ul}) {
        DiscreteOccupation full(g), part1(g), part2(g);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            full.accumulate(levels[i], dt);
            (i < split ? part1 : part2).accumulate(levels[i], dt);
        }
        part1.merge(part2);
        CHECK(metric(full, part1, MetricOrder::tv) == 0.0);
        CHECK(full.total_mass() == part1.total_mass());
    }

    // non-dyadic weights agree to rounding
    DiscreteOccupation full(g), p1(g), p2(g);
    const double w = 1.0 / 300;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        full.accumulate(levels[i], w);
        (i < 200 ? p1 : p2).accumulate(levels[i], w);
    }
    p1.merge(p2);
    CHECK(metric(full, p1, MetricOrder::tv) <= 1e-12 * full.total_mass());
}

TEST_CASE("occupation CSV carries the trailer accumulators") {
    auto g = make_grid(0.0, 1.0, 3);
    DiscreteOccupation occ(g, 0.0);
    occ.accumulate(0.5, 0.25);
    std::ostringstream os;
    occ.serialize_csv(os);
    const std::string s = os.str();
    CHECK(s.find("node,mass") == 0);
    CHECK(s.find("# total_mass=0.25") != std::string::npos);
    CHECK(s.find("min=0") != std::string::npos);
}
