#include "occflow/lov.hpp"

#include "occflow/errors.hpp"
#include "occflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace occflow {

SensitivityFunction SensitivityFunction::one_factor(double beta, double lo, double hi) {
    if (!(lo < hi)) throw config_error("SensitivityFunction: corridor bounds out of order");
    SensitivityFunction f;
    f.kind = Kind::one_factor;
    f.beta = beta;
    f.lo = lo;
    f.hi = hi;
    return f;
}

SensitivityFunction SensitivityFunction::ema(double beta) {
    SensitivityFunction f;
    f.kind = Kind::ema;
    f.beta = beta;
    return f;
}

SensitivityFunction SensitivityFunction::tanh_moneyness(double alpha, const LocalVolTable& sigma_loc) {
    if (!(alpha > 0.0)) throw config_error("SensitivityFunction: tanh needs alpha > 0");
    SensitivityFunction f;
    f.kind = Kind::tanh_moneyness;
    f.alpha = alpha;
    f.var_floor = sigma_loc.min_vol() * sigma_loc.min_vol();
    return f;
}

double SensitivityFunction::operator()(double, double spot, double level) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::one_factor: return (level >= lo && level <= hi) ? beta : 0.0;
        case Kind::ema: return beta * std::log(level);
        case Kind::tanh_moneyness: return 0.25 * var_floor * std::tanh(alpha * level / spot);
    }
    return 0.0;
}

double SensitivityFunction::sup_abs(double t, double spot, std::span<const double> levels) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::one_factor: return std::abs(beta);
        case Kind::tanh_moneyness: return 0.25 * var_floor;  // |tanh| < 1
        case Kind::ema: break;
    }
    double sup = 0.0;
    for (double x : levels) sup = std::max(sup, std::abs((*this)(t, spot, x)));
    return sup;
}

double gamma_scale(double kappa, double t) {
    if (t < 0.0) throw domain_error("gamma_scale: negative time");
    if (t == 0.0) return 0.0;  // correction term is defined as zero at t = 0
    if (kappa == 0.0) return 1.0 / t;
    return kappa / std::expm1(kappa * t);
}

PositivityReport check_positivity(const LovConfig& cfg, std::span<const double> times,
                                  std::span<const double> levels) {
    PositivityReport rep;
    bool first = true;
    for (double t : times) {
        for (double spot : levels) {
            const double sup = cfg.ell.sup_abs(t, spot, levels);
            const double bound =
                cfg.multiplicative ? 0.5 : 0.5 * cfg.sigma_loc.variance(t, spot);
            const double margin = bound - sup;
            if (first || margin < rep.worst_margin) {
                first = false;
                rep.worst_margin = margin;
                rep.worst_time = t;
                rep.worst_spot = spot;
            }
        }
    }
    rep.pass = rep.worst_margin > 0.0;
    return rep;
}

namespace {

double correction_sum(const CorridorGrid& grid, std::span<const double> occ,
                      std::span<const double> occ_hat, double spot, double t,
                      const SensitivityFunction& ell) {
    double sum = 0.0;
    for (std::size_t m = 0; m < occ.size(); ++m) {
        const double spread = occ[m] - occ_hat[m];
        if (spread != 0.0) sum += ell(t, spot, grid.node(m)) * spread;
    }
    return sum;
}

// Occupied variance and sigma from mass spans; exact local-vol collapse when
// the correction vanishes.
double lov_variance_core(const CorridorGrid& grid, std::span<const double> occ,
                         std::span<const double> occ_hat, double spot, double t,
                         const LovConfig& cfg, std::atomic<long>* floor_counter) {
    const double base = cfg.sigma_loc.variance(t, spot);
    const double g = gamma_scale(cfg.kappa, t);
    if (g == 0.0 || cfg.ell.kind == SensitivityFunction::Kind::zero) return base;

    const double sum = correction_sum(grid, occ, occ_hat, spot, t, cfg.ell);
    if (sum == 0.0) return base;
    const double var = cfg.multiplicative ? base * (1.0 + g * sum) : base + g * sum;
    if (var > 0.0) return var;
    if (floor_counter) floor_counter->fetch_add(1, std::memory_order_relaxed);
    return cfg.var_floor;
}

}  // namespace

double lov_variance(const DiscreteOccupation& occ, const DiscreteOccupation& occ_hat, double spot,
                    double t, const LovConfig& cfg, std::atomic<long>* floor_counter) {
    if (!occ.grid().same_grid(occ_hat.grid()))
        throw dimension_error("lov_variance: occupation grids differ");
    return lov_variance_core(occ.grid(), occ.masses(), occ_hat.masses(), spot, t, cfg,
                             floor_counter);
}

std::vector<std::vector<double>> particle_projection(std::span<const double> spots,
                                                     const std::vector<std::vector<double>>& occ,
                                                     double bandwidth, int threads) {
    if (spots.size() != occ.size() || spots.empty())
        throw dimension_error("particle_projection: spots/occupations size mismatch");
    if (!(bandwidth > 0.0)) throw config_error("particle_projection: bandwidth must be positive");

    const std::size_t J = spots.size();
    const std::size_t M = occ[0].size();

    // Sort once so each particle sees only the window |X_j - X_j'| <= h.
    std::vector<std::size_t> order(J);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return spots[a] < spots[b]; });
    std::vector<double> sorted(J);
    for (std::size_t k = 0; k < J; ++k) sorted[k] = spots[order[k]];

    std::vector<std::vector<double>> out(J);
    parallel_for(J, threads, [&](std::size_t j) {
        const double xj = spots[j];
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), xj - bandwidth);
        const auto hi = std::upper_bound(sorted.begin(), sorted.end(), xj + bandwidth);

        std::vector<double> num(M, 0.0);
        double den = 0.0;
        for (auto it = lo; it != hi; ++it) {
            const std::size_t jp = order[static_cast<std::size_t>(it - sorted.begin())];
            const double u = (xj - spots[jp]) / bandwidth;
            const double v = 1.0 - u * u;
            if (v <= 0.0) continue;
            const double w = 0.9375 * v * v / bandwidth;
            den += w;
            const auto& src = occ[jp];
            for (std::size_t m = 0; m < M; ++m) num[m] += w * src[m];
        }
        for (std::size_t m = 0; m < M; ++m) num[m] /= den;
        out[j] = std::move(num);
    });
    return out;
}

LovSimResult simulate_lov(const SimConfig& cfg, const LovConfig& lov) {
    cfg.validate();
    if (!cfg.grid) throw config_error("simulate_lov: config carries no corridor grid");
    if (cfg.n_paths < 2) throw config_error("simulate_lov: particle method needs >= 2 paths");
    if (!(lov.bandwidth_kappa > 0.0)) throw config_error("simulate_lov: bandwidth scale <= 0");

    const std::size_t J = cfg.n_paths;
    const std::size_t N = cfg.n_steps;
    const std::size_t M = cfg.grid->size();
    const std::size_t n_base = cfg.antithetic ? J / 2 : J;
    const double dt = cfg.dt();
    const double sqdt = std::sqrt(dt);
    const double drift = cfg.rate - cfg.dividend;
    const bool zero_ell = lov.ell.kind == SensitivityFunction::Kind::zero;
    const CounterRng rng(cfg.seed);

    LovSimResult res;
    {
        std::vector<double> scan_times{0.0, 0.5 * cfg.horizon, cfg.horizon};
        res.positivity = check_positivity(lov, scan_times, cfg.grid->nodes());
    }

    res.ensemble.config = cfg;
    // the occupation flow runs on the exponential clock regardless of cfg.clock
    res.ensemble.config.clock = Clock::exponential(lov.kappa);
    res.ensemble.paths.reserve(J);
    for (std::size_t j = 0; j < J; ++j)
        res.ensemble.paths.push_back(
            OccupiedPath{cfg.x0, DiscreteOccupation(cfg.grid, cfg.x0), {}, {}, {}, {}});
    auto& paths = res.ensemble.paths;

    std::vector<double> spots(J, cfg.x0);
    std::vector<std::vector<double>> occ(J, std::vector<double>(M, 0.0));
    std::atomic<long> floors{0};
    res.final_spots.resize(J);
    res.final_corrections.resize(J);

    if (cfg.store_paths) {
        for (auto& p : paths) {
            p.times.assign(N + 1, 0.0);
            p.levels.assign(N + 1, cfg.x0);
            p.vols.assign(N, 0.0);
        }
    }

    for (std::size_t n = 0; n < N; ++n) {
        const double t = dt * static_cast<double>(n);
        const double delta = dt * static_cast<double>(n + 1) - t;
        const double clock_w = std::exp(lov.kappa * t) * delta;

        // 1. occupation update at the current level
        for (std::size_t j = 0; j < J; ++j) {
            paths[j].occupation.accumulate(spots[j], clock_w);
            occ[j][cfg.grid->bin_of(spots[j])] += clock_w;
        }

        // 2. particle projection of the occupation onto the spot
        std::vector<std::vector<double>> occ_hat;
        double sd = 0.0;
        if (!zero_ell) {
            double mean = 0.0;
            for (double s : spots) mean += s;
            mean /= static_cast<double>(J);
            for (double s : spots) sd += (s - mean) * (s - mean);
            sd = std::sqrt(sd / static_cast<double>(J));
            if (sd > 0.0) {
                const double h = lov.bandwidth_kappa * sd *
                                 std::pow(static_cast<double>(J), -lov.bandwidth_exponent);
                occ_hat = particle_projection(spots, occ, h, cfg.threads);
            } else {
                // all spots equal: every projection is the ensemble mean
                std::vector<double> mean_occ(M, 0.0);
                for (const auto& o : occ)
                    for (std::size_t m = 0; m < M; ++m) mean_occ[m] += o[m];
                for (double& v : mean_occ) v /= static_cast<double>(J);
                occ_hat.assign(J, mean_occ);
            }
        }

        // 3. occupied variance, 4. log-Euler step
        const double g = gamma_scale(lov.kappa, t);
        const bool last = (n + 1 == N);
        parallel_for(J, cfg.threads, [&](std::size_t j) {
            double var;
            double corr = 0.0;
            if (zero_ell || g == 0.0) {
                var = lov.sigma_loc.variance(t, spots[j]);
            } else {
                const double sum =
                    correction_sum(*cfg.grid, occ[j], occ_hat[j], spots[j], t, lov.ell);
                const double base = lov.sigma_loc.variance(t, spots[j]);
                corr = lov.multiplicative ? base * g * sum : g * sum;
                var = base + corr;
                if (var <= 0.0) {
                    floors.fetch_add(1, std::memory_order_relaxed);
                    var = lov.var_floor;
                }
            }
            // exact local-vol collapse when the correction vanishes
            const double sigma =
                (corr == 0.0) ? lov.sigma_loc(t, spots[j]) : std::sqrt(var);
            if (!std::isfinite(sigma)) {
                std::ostringstream msg;
                msg << "simulate_lov: bad volatility at path " << j << " step " << n;
                throw numeric_error(msg.str());
            }
            if (last) {
                res.final_spots[j] = spots[j];
                res.final_corrections[j] = corr;
            }

            const std::size_t stream = cfg.antithetic ? (j % n_base) : j;
            const double flip = (cfg.antithetic && j >= n_base) ? -1.0 : 1.0;
            // same expression as euler_occupied so the zero-ell collapse is bit-exact
            spots[j] *= std::exp(sigma * sqdt * flip * rng.normal(stream, n) +
                                 (drift - 0.5 * sigma * sigma) * dt);
            if (cfg.store_paths) {
                paths[j].times[n + 1] = dt * static_cast<double>(n + 1);
                paths[j].levels[n + 1] = spots[j];
                paths[j].vols[n] = sigma;
            }
        });
    }

    for (std::size_t j = 0; j < J; ++j) paths[j].terminal_level = spots[j];
    res.floor_events = floors.load();
    return res;
}

}  // namespace occflow
