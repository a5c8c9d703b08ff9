#include "occflow/stopping.hpp"

#include "occflow/errors.hpp"
#include "occflow/normal.hpp"
#include "occflow/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace occflow::stopping {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct MeanStderr {
    double mean = 0.0;
    double se = 0.0;
};

// Antithetic pairs are collapsed before the variance estimate.
MeanStderr reduce(const std::vector<double>& values, bool antithetic) {
    std::vector<double> s;
    if (antithetic) {
        const std::size_t half = values.size() / 2;
        s.reserve(half);
        for (std::size_t j = 0; j < half; ++j) s.push_back(0.5 * (values[j] + values[j + half]));
    } else {
        s = values;
    }
    double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var = s.size() > 1 ? var / static_cast<double>(s.size() - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(s.size()))};
}

}  // namespace

double analytic_euro_value(double maturity) {
    if (maturity < 0.0) throw domain_error("analytic_euro_value: negative maturity");
    return std::sqrt(2.0 * maturity / kPi);
}

double eps_expansion(double maturity, double eps) {
    return analytic_euro_value(maturity) - 0.5 * eps +
           eps * eps / std::sqrt(18.0 * kPi * maturity);
}

double continuation_value(const DiscreteOccupation& occ, double spot, double t, double maturity,
                          bool* terminal_flag) {
    if (terminal_flag) *terminal_flag = false;
    if (t >= maturity) {
        if (terminal_flag) *terminal_flag = true;
        const std::size_t m = occ.grid().bin_of(spot);
        return occ.mass(m) / occ.grid().width(m);
    }
    const double s = maturity - t;
    const double cutoff = 10.0 * std::sqrt(s);
    const CorridorGrid& grid = occ.grid();
    const auto masses = occ.masses();

    double sum = 0.0;
    // the grid is ordered; only nodes within the kernel's reach contribute
    const std::size_t first = grid.bin_of(spot - cutoff);
    const std::size_t last = grid.bin_of(spot + cutoff);
    for (std::size_t m = first; m <= last; ++m)
        if (masses[m] != 0.0) sum += masses[m] * norm_pdf_var(spot - grid.node(m), s);
    return sum + analytic_euro_value(s);
}

GridPtr default_stopping_grid() { return make_grid(0.0, 4.0, 801); }

namespace {

// Continuation value consistent with the corridor reward: the accrued part is
// the heat-kernel pairing with the occupation, the fresh part is the corridor
// value eps_expansion(T - t, eps) rather than its eps -> 0 limit. Comparing
// the corridor intrinsic against the limiting tail would overstate exercise.
double corridor_continuation(const DiscreteOccupation& occ, double spot, double t, double maturity,
                             double eps) {
    return continuation_value(occ, spot, t, maturity) - analytic_euro_value(maturity - t) +
           eps_expansion(maturity - t, eps);
}

}  // namespace

int trinomial_step(const CounterRng& rng, std::uint64_t stream, std::uint64_t step) {
    const double u = rng.uniform(stream, step);
    if (u < 1.0 / 6.0) return -1;
    if (u > 5.0 / 6.0) return 1;
    return 0;
}

StoppingResult two_date_value(double maturity, double t, std::size_t n_steps, double eps,
                              std::size_t n_paths, std::uint64_t seed, GridPtr grid,
                              int threads) {
    if (!(t > 0.0 && t < maturity)) throw config_error("two_date_value: need 0 < t < T");
    if (!(eps > 0.0)) throw config_error("two_date_value: eps must be positive");
    if (n_steps < 2) throw config_error("two_date_value: need an interior grid step");
    if (!grid) grid = default_stopping_grid();

    const double dt = maturity / static_cast<double>(n_steps);
    const double sqdt = std::sqrt(dt);
    std::size_t n_t = static_cast<std::size_t>(std::llround(t / dt));
    n_t = std::clamp<std::size_t>(n_t, 1, n_steps - 1);
    const double t_snap = dt * static_cast<double>(n_t);
    const CounterRng rng(seed);

    std::vector<double> values(n_paths), continuations(n_paths);
    std::vector<char> exercised_flags(n_paths, 0);
    parallel_for(n_paths, threads, [&](std::size_t j) {
        DiscreteOccupation occ(grid, 0.0);
        double x = 0.0;
        for (std::size_t n = 0; n < n_t; ++n) {
            x += sqdt * rng.normal(j, n);
            occ.accumulate(x, dt);
        }
        const double intrinsic = occ.local_time(x, eps);
        const double cont = corridor_continuation(occ, x, t_snap, maturity, eps);
        continuations[j] = cont;
        exercised_flags[j] = intrinsic >= cont;
        values[j] = std::max(intrinsic, cont);
    });
    double cont_sum = 0.0;
    std::size_t exercised = 0;
    for (std::size_t j = 0; j < n_paths; ++j) {
        cont_sum += continuations[j];
        exercised += exercised_flags[j];
    }

    const MeanStderr ms = reduce(values, false);
    StoppingResult res;
    res.value = ms.mean;
    res.stderror = ms.se;
    res.n_paths = n_paths;
    res.strategy = "two-date";
    res.exercise_freq = {static_cast<double>(exercised) / static_cast<double>(n_paths)};
    res.mean_continuation = cont_sum / static_cast<double>(n_paths);
    res.snapped = std::abs(t_snap - t) > 1e-12 * maturity;
    return res;
}

namespace {

// Argmax of the corridor local time over the scan grid; ties toward the
// smallest |x|, then the smallest x.
double scan_argmax(const DiscreteOccupation& occ, const SpaceGrid& scan, double eps) {
    double best_x = scan.point(0);
    double best_v = -1.0;
    for (std::size_t i = 0; i <= scan.n_intervals; ++i) {
        const double x = scan.point(i);
        const double v = occ.local_time(x, eps);
        const bool better =
            v > best_v ||
            (v == best_v && (std::abs(x) < std::abs(best_x) ||
                             (std::abs(x) == std::abs(best_x) && x < best_x)));
        if (better) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

struct InspectionOutcome {
    double reward = 0.0;
    bool hit = false;
};

// Walks one path from the inspection step to the first hit of the target
// level, else the horizon. A sampled path hits the level when a step brackets
// it (sign change), the discrete stand-in for the continuous-time first
// passage; at the hit the spot is the target level by construction, so the
// corridor reward is evaluated there. Misses pay the terminal spot reward.
InspectionOutcome inspect_path(const std::vector<double>& levels, std::size_t n_iota,
                               std::size_t n_steps, double dt, double eps,
                               DiscreteOccupation& occ, const SpaceGrid& scan) {
    for (std::size_t n = 1; n <= n_iota; ++n) occ.accumulate(levels[n], dt);
    const double target = scan_argmax(occ, scan, eps);

    if (std::abs(levels[n_iota] - target) <= 0.5 * scan.spacing())
        return {occ.local_time(target, eps), true};
    for (std::size_t k = n_iota + 1; k <= n_steps; ++k) {
        occ.accumulate(levels[k], dt);
        if ((levels[k - 1] - target) * (levels[k] - target) <= 0.0)
            return {occ.local_time(target, eps), true};
    }
    return {occ.local_time(levels[n_steps], eps), false};
}

}  // namespace

StoppingResult inspection_value(double iota, double maturity, std::size_t n_steps, double eps,
                                std::size_t n_paths, std::uint64_t seed, const SpaceGrid& scan,
                                GridPtr grid, int threads) {
    if (!(iota > 0.0 && iota < maturity)) throw config_error("inspection_value: need 0 < iota < T");
    if (!(eps > 0.0)) throw config_error("inspection_value: eps must be positive");
    if (n_steps < 2) throw config_error("inspection_value: need an interior grid step");
    if (!grid) grid = default_stopping_grid();

    const double dt = maturity / static_cast<double>(n_steps);
    const double sqdt = std::sqrt(dt);
    std::size_t n_iota = static_cast<std::size_t>(std::llround(iota / dt));
    n_iota = std::clamp<std::size_t>(n_iota, 1, n_steps - 1);
    const CounterRng rng(seed);

    std::vector<double> values(n_paths);
    std::vector<char> hit_flags(n_paths, 0);
    parallel_for(n_paths, threads, [&](std::size_t j) {
        std::vector<double> levels(n_steps + 1);
        levels[0] = 0.0;
        for (std::size_t n = 0; n < n_steps; ++n)
            levels[n + 1] = levels[n] + sqdt * rng.normal(j, n);
        DiscreteOccupation occ(grid, 0.0);
        const InspectionOutcome out = inspect_path(levels, n_iota, n_steps, dt, eps, occ, scan);
        values[j] = out.reward;
        hit_flags[j] = out.hit;
    });
    std::size_t hits = 0;
    for (char h : hit_flags) hits += h;

    const MeanStderr ms = reduce(values, false);
    StoppingResult res;
    res.value = ms.mean;
    res.stderror = ms.se;
    res.n_paths = n_paths;
    res.strategy = "inspection";
    res.exercise_freq = {static_cast<double>(hits) / static_cast<double>(n_paths)};
    res.snapped = std::abs(dt * static_cast<double>(n_iota) - iota) > 1e-12 * maturity;
    return res;
}

std::vector<SweepRow> eps_sweep(SweepStrategy strategy, std::vector<double> eps_values,
                                double maturity, std::size_t n_steps, std::size_t n_paths,
                                std::uint64_t seed, double iota, const SpaceGrid& scan,
                                GridPtr grid, int threads) {
    for (double e : eps_values)
        if (!(e > 0.0 && e <= 1.0)) throw config_error("eps_sweep: eps values must lie in (0, 1]");
    if (n_steps < 2) throw config_error("eps_sweep: need an interior grid step");
    if (!grid) grid = default_stopping_grid();

    const double dt = maturity / static_cast<double>(n_steps);
    const double sqdt = std::sqrt(dt);
    const std::size_t n_iota = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(iota / dt)), 1, n_steps - 1);
    const CounterRng rng(seed);

    std::vector<std::vector<double>> rewards(eps_values.size(), std::vector<double>(n_paths));
    parallel_for(n_paths, threads, [&](std::size_t j) {
        std::vector<double> levels(n_steps + 1);
        levels[0] = 0.0;
        for (std::size_t n = 0; n < n_steps; ++n)
            levels[n + 1] = levels[n] + sqdt * rng.normal(j, n);

        if (strategy == SweepStrategy::european) {
            DiscreteOccupation occ(grid, 0.0);
            for (std::size_t n = 1; n <= n_steps; ++n) occ.accumulate(levels[n], dt);
            for (std::size_t e = 0; e < eps_values.size(); ++e)
                rewards[e][j] = occ.local_time(levels[n_steps], eps_values[e]);
        } else {
            for (std::size_t e = 0; e < eps_values.size(); ++e) {
                DiscreteOccupation occ(grid, 0.0);
                rewards[e][j] =
                    inspect_path(levels, n_iota, n_steps, dt, eps_values[e], occ, scan).reward;
            }
        }
    });

    std::vector<SweepRow> rows(eps_values.size());
    for (std::size_t e = 0; e < eps_values.size(); ++e) {
        const MeanStderr ms = reduce(rewards[e], false);
        rows[e] = {eps_values[e], ms.mean, ms.se,
                   strategy == SweepStrategy::european ? eps_expansion(maturity, eps_values[e])
                                                       : 0.0};
    }
    return rows;
}

namespace {

// Laguerre polynomials of degree 1..3 appended to the design row; the
// weighted variant scales by sqrt(w), w(x) = e^-x.
inline void laguerre_columns(double x, bool weighted, double* out) {
    out[0] = 1.0 - x;
    out[1] = 1.0 - 2.0 * x + 0.5 * x * x;
    out[2] = 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
    if (weighted) {
        const double s = std::exp(-0.5 * x);
        out[0] *= s;
        out[1] *= s;
        out[2] *= s;
    }
}

struct TrinomialEnsemble {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    std::vector<std::int8_t> incs;       // n_paths x n_steps node increments
    std::vector<std::uint16_t> counts;   // n_paths x (2N+1) node visit counters
    std::vector<int> node;               // current node per path (backward walks)
    std::vector<double> y;               // value along each path

    std::int8_t inc(std::size_t j, std::size_t n) const { return incs[j * n_steps + n]; }
    std::uint16_t* counts_row(std::size_t j) { return counts.data() + j * (2 * n_steps + 1); }
};

// Simulates trinomial paths (antithetic halves mirrored), builds terminal
// visit counters and the terminal spot local time.
TrinomialEnsemble simulate_trinomial(std::size_t n_paths, std::size_t n_steps, std::uint64_t seed,
                                     std::uint32_t phase, double lt_scale) {
    if (n_paths % 2 != 0) throw config_error("lsmc: antithetic sampling needs even path counts");
    TrinomialEnsemble ens;
    ens.n_paths = n_paths;
    ens.n_steps = n_steps;
    ens.incs.resize(n_paths * n_steps);
    ens.counts.assign(n_paths * (2 * n_steps + 1), 0);
    ens.node.assign(n_paths, 0);
    ens.y.assign(n_paths, 0.0);

    const CounterRng rng(seed);
    const std::size_t half = n_paths / 2;
    for (std::size_t j = 0; j < n_paths; ++j) {
        const std::size_t stream = j % half;
        const int flip = j < half ? 1 : -1;
        std::uint16_t* cnt = ens.counts_row(j);
        int m = 0;
        for (std::size_t n = 0; n < n_steps; ++n) {
            const int step = flip * trinomial_step(rng, stream, (static_cast<std::uint64_t>(phase)
                                                                 << 32) + n);
            ens.incs[j * n_steps + n] = static_cast<std::int8_t>(step);
            m += step;
            ++cnt[m + static_cast<int>(n_steps)];
        }
        ens.node[j] = m;
        ens.y[j] = lt_scale * cnt[m + static_cast<int>(n_steps)];
    }
    return ens;
}

}  // namespace

StoppingResult lsmc_value(std::size_t m_bar, std::size_t n_steps, std::size_t n_paths_offline,
                          std::size_t n_paths_online, double maturity, std::uint64_t seed,
                          bool weighted_basis) {
    if (m_bar >= n_steps) throw config_error("lsmc_value: truncation must be << n_steps");
    const double dt = maturity / static_cast<double>(n_steps);
    const double node_spacing = std::sqrt(3.0 * dt);
    const double lt_scale = std::sqrt(dt / 3.0);  // dt / (2 eps), eps = spacing / 2
    const std::size_t n_features = 2 * m_bar + 2;
    const std::size_t n_cols = 1 + 3 * n_features;
    const std::size_t n_min = std::max<std::size_t>(m_bar, 1);
    const int n_off = static_cast<int>(n_steps);

    StoppingResult res;
    res.strategy = weighted_basis ? "lsmc-weighted" : "lsmc";
    res.coefficients.assign(n_steps, {});
    res.exercise_freq.assign(n_steps, 0.0);

    auto fill_row = [&](TrinomialEnsemble& ens, std::size_t j, double* row) {
        const std::uint16_t* cnt = ens.counts_row(j);
        const int m = ens.node[j];
        row[0] = 1.0;
        double* out = row + 1;
        for (int d = -static_cast<int>(m_bar); d <= static_cast<int>(m_bar); ++d) {
            laguerre_columns(lt_scale * cnt[m + d + n_off], weighted_basis, out);
            out += 3;
        }
        laguerre_columns(std::exp(node_spacing * m), weighted_basis, out);
    };

    // ---- offline: fit per-step coefficients -------------------------------
    TrinomialEnsemble off = simulate_trinomial(n_paths_offline, n_steps, seed, 0, lt_scale);
    {
        std::vector<double> row(n_cols);
        Eigen::MatrixXd gram(n_cols, n_cols);
        Eigen::VectorXd rhs(n_cols);
        for (std::size_t n = n_steps - 1; n >= n_min; --n) {
            std::vector<std::size_t> eligible;
            eligible.reserve(off.n_paths);
            for (std::size_t j = 0; j < off.n_paths; ++j) {
                // step back: drop the arrival visit of step n+1
                std::uint16_t* cnt = off.counts_row(j);
                --cnt[off.node[j] + n_off];
                off.node[j] -= off.inc(j, n);
                if (std::abs(off.node[j]) <= static_cast<int>(n - m_bar)) eligible.push_back(j);
            }

            gram.setZero();
            rhs.setZero();
            for (std::size_t j : eligible) {
                fill_row(off, j, row.data());
                for (std::size_t a = 0; a < n_cols; ++a) {
                    rhs(a) += row[a] * off.y[j];
                    for (std::size_t b = a; b < n_cols; ++b) gram(a, b) += row[a] * row[b];
                }
            }
            gram = gram.selfadjointView<Eigen::Upper>();

            Eigen::VectorXd beta;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
            bool ok = ldlt.info() == Eigen::Success;
            if (ok) {
                beta = ldlt.solve(rhs);
                ok = beta.allFinite() &&
                     (gram * beta - rhs).norm() <= 1e-6 * (rhs.norm() + 1.0);
            }
            if (!ok) {
                const double lambda = 1e-8 * gram.trace() / static_cast<double>(n_cols);
                Eigen::MatrixXd ridged = gram;
                ridged.diagonal().array() += std::max(lambda, 1e-300);
                beta = ridged.ldlt().solve(rhs);
                ++res.ridge_events;
            }
            res.coefficients[n].assign(beta.data(), beta.data() + n_cols);

            std::size_t exercised = 0;
            for (std::size_t j : eligible) {
                fill_row(off, j, row.data());
                double cont = 0.0;
                for (std::size_t a = 0; a < n_cols; ++a) cont += beta(a) * row[a];
                const double intrinsic =
                    lt_scale * off.counts_row(j)[off.node[j] + n_off];
                if (intrinsic >= cont) {
                    off.y[j] = intrinsic;
                    ++exercised;
                }
            }
            res.exercise_freq[n] =
                static_cast<double>(exercised) / static_cast<double>(off.n_paths);
        }
    }
    {
        const MeanStderr ms = reduce(off.y, true);
        res.offline_value = ms.mean;
        res.offline_stderror = ms.se;
    }

    // ---- online: revalue the fitted rule on fresh paths -------------------
    TrinomialEnsemble on = simulate_trinomial(n_paths_online, n_steps, seed, 1, lt_scale);
    {
        std::vector<double> row(n_cols);
        for (std::size_t n = n_steps - 1; n >= n_min; --n) {
            const std::vector<double>& beta = res.coefficients[n];
            for (std::size_t j = 0; j < on.n_paths; ++j) {
                std::uint16_t* cnt = on.counts_row(j);
                --cnt[on.node[j] + n_off];
                on.node[j] -= on.inc(j, n);
                if (std::abs(on.node[j]) > static_cast<int>(n - m_bar)) continue;
                fill_row(on, j, row.data());
                double cont = 0.0;
                for (std::size_t a = 0; a < n_cols; ++a) cont += beta[a] * row[a];
                const double intrinsic = lt_scale * cnt[on.node[j] + n_off];
                if (intrinsic >= cont) on.y[j] = intrinsic;
            }
        }
        const MeanStderr ms = reduce(on.y, true);
        res.value = ms.mean;
        res.stderror = ms.se;
        res.n_paths = n_paths_online;
    }
    return res;
}

}  // namespace occflow::stopping
