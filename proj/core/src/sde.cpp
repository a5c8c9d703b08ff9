#include "occflow/sde.hpp"

#include "occflow/errors.hpp"
#include "occflow/parallel.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace occflow {

void SimConfig::validate() const {
    if (!(horizon > 0.0)) throw config_error("SimConfig: horizon must be positive");
    if (n_steps < 1) throw config_error("SimConfig: need at least one step");
    if (n_paths < 1) throw config_error("SimConfig: need at least one path");
    if (antithetic && n_paths % 2 != 0)
        throw config_error("SimConfig: antithetic sampling needs an even path count");
    if (clock.kind == Clock::Kind::exponential && clock.kappa < 0.0)
        throw config_error("SimConfig: exponential clock rate must be nonnegative");
}

VolatilityFunctional constant_vol(double sigma) {
    if (sigma < 0.0) throw config_error("constant_vol: sigma must be nonnegative");
    return [sigma](const DiscreteOccupation&, double, double) { return sigma; };
}

VolatilityFunctional local_vol(LocalVolTable table) {
    return [table = std::move(table)](const DiscreteOccupation&, double x, double t) {
        return table(t, x);
    };
}

double ema(const DiscreteOccupation& occ) { return occ.barycenter(); }

double GuyonToyVol::trend(const DiscreteOccupation& occ, double x) const {
    const double anchor = occ.empty() ? x0 : occ.barycenter();
    return x / anchor;
}

double GuyonToyVol::operator()(const DiscreteOccupation& occ, double x, double) const {
    const double y = trend(occ, x);
    if (!(y > 0.0)) throw numeric_error("GuyonToyVol: nonpositive trend ratio");
    const double sigma = -alpha / beta + gamma * std::pow(y, -beta);
    return sigma > 0.0 ? sigma : 0.0;
}

std::vector<std::vector<double>> simulate_bm(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n_base = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    const double sqdt = std::sqrt(cfg.dt());
    const CounterRng rng(cfg.seed);

    std::vector<std::vector<double>> out(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
        const std::size_t stream = cfg.antithetic ? (j % n_base) : j;
        const double flip = (cfg.antithetic && j >= n_base) ? -1.0 : 1.0;
        std::vector<double> path(cfg.n_steps + 1);
        path[0] = cfg.x0;
        for (std::size_t n = 0; n < cfg.n_steps; ++n)
            path[n + 1] = path[n] + sqdt * flip * rng.normal(stream, n);
        out[j] = std::move(path);
    });
    return out;
}

PathEnsemble euler_occupied(const SimConfig& cfg, const VolatilityFunctional& vol) {
    cfg.validate();
    if (!cfg.grid) throw config_error("euler_occupied: config carries no corridor grid");
    const std::size_t n_base = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    const double dt = cfg.dt();
    const double sqdt = std::sqrt(dt);
    const double drift = cfg.rate - cfg.dividend;
    const bool quad = cfg.clock.needs_vol();
    const CounterRng rng(cfg.seed);

    // Snapshot slots by step index: a snapshot at step k captures the measure
    // of [0, t_k), which the quadratic clock only completes one accumulate
    // later than the deterministic clocks.
    std::vector<std::vector<std::size_t>> snapshot_slots(cfg.n_steps + 1);
    for (std::size_t s = 0; s < cfg.snapshot_times.size(); ++s) {
        const double d = cfg.snapshot_times[s];
        if (d < 0.0 || d > cfg.horizon)
            throw config_error("euler_occupied: snapshot date outside [0, T]");
        const auto k = static_cast<std::size_t>(std::llround(d / dt));
        snapshot_slots[std::min(k, cfg.n_steps)].push_back(s);
    }

    PathEnsemble ens;
    ens.config = cfg;
    ens.paths.reserve(cfg.n_paths);
    for (std::size_t j = 0; j < cfg.n_paths; ++j)
        ens.paths.push_back(OccupiedPath{cfg.x0, DiscreteOccupation(cfg.grid, cfg.x0), {}, {}, {}, {}});

    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
        const std::size_t stream = cfg.antithetic ? (j % n_base) : j;
        const double flip = (cfg.antithetic && j >= n_base) ? -1.0 : 1.0;

        OccupiedPath& p = ens.paths[j];
        if (cfg.store_paths) {
            p.times.resize(cfg.n_steps + 1);
            p.levels.resize(cfg.n_steps + 1);
            p.vols.resize(cfg.n_steps);
        }
        if (!cfg.snapshot_times.empty())
            p.snapshots.assign(cfg.snapshot_times.size(), DiscreteOccupation(cfg.grid, cfg.x0));

        double x = cfg.x0;
        double sigma_prev = 0.0;
        double delta_prev = dt;
        if (cfg.store_paths) {
            p.times[0] = 0.0;
            p.levels[0] = x;
        }
        for (std::size_t n = 0; n < cfg.n_steps; ++n) {
            const double t = dt * static_cast<double>(n);
            // Step lengths as time-grid differences, so the terminal occupation
            // is reproducible bit-for-bit via occupation_from_path.
            const double delta = dt * static_cast<double>(n + 1) - t;
            if (!quad) {
                for (std::size_t s : snapshot_slots[n]) p.snapshots[s] = p.occupation;
                p.occupation.accumulate(x, cfg.clock.increment(t, delta));
            } else {
                if (n > 0) p.occupation.accumulate(x, sigma_prev * sigma_prev * delta_prev);
                for (std::size_t s : snapshot_slots[n]) p.snapshots[s] = p.occupation;
            }

            const double sigma = vol(p.occupation, x, t);
            if (!std::isfinite(sigma) || sigma < 0.0) {
                std::ostringstream msg;
                msg << "euler_occupied: bad volatility " << sigma << " at path " << j << " step "
                    << n << " level " << x;
                throw numeric_error(msg.str());
            }

            x *= std::exp(sigma * sqdt * flip * rng.normal(stream, n) +
                          (drift - 0.5 * sigma * sigma) * dt);
            if (!std::isfinite(x) || x == 0.0) {
                std::ostringstream msg;
                msg << "euler_occupied: level degenerated to " << x << " at path " << j
                    << " step " << n << " (sigma " << sigma << ")";
                throw numeric_error(msg.str());
            }
            sigma_prev = sigma;
            delta_prev = delta;
            if (cfg.store_paths) {
                p.times[n + 1] = dt * static_cast<double>(n + 1);
                p.levels[n + 1] = x;
                p.vols[n] = sigma;
            }
        }
        if (quad) p.occupation.accumulate(x, sigma_prev * sigma_prev * delta_prev);
        for (std::size_t s : snapshot_slots[cfg.n_steps]) p.snapshots[s] = p.occupation;
        p.terminal_level = x;
    });
    return ens;
}

}  // namespace occflow
