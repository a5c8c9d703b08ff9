#include "occflow/calibration.hpp"
#include "occflow/config_file.hpp"
#include "occflow/csv.hpp"
#include "occflow/errors.hpp"
#include "occflow/lov.hpp"
#include "occflow/path_transform.hpp"
#include "occflow/payoffs.hpp"
#include "occflow/pricing.hpp"
#include "occflow/reference_tables.hpp"
#include "occflow/replication.hpp"
#include "occflow/sde.hpp"
#include "occflow/stopping.hpp"
#include "occflow/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace occflow;

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Effective settings, echoed into CSV header comments and hashed. Insertion
// order is preserved so the hash is stable.
class Settings {
public:
    void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void set(const std::string& key, double value) { entries_.emplace_back(key, format_double(value)); }
    void set(const std::string& key, std::uint64_t value) {
        entries_.emplace_back(key, std::to_string(value));
    }
    std::uint64_t hash() const { return config_hash(entries_); }

    CsvWriter writer(std::uint64_t seed) const {
        CsvWriter w(kVersion, seed, hash());
        for (const auto& [k, v] : entries_) w.set_comment(k, v);
        return w;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("OCCFLOW_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw config_error("OCCFLOW_SEED is not an integer");
        }
    }
    return flag_seed;
}

GridPtr parse_grid(const std::string& spec) {
    double center, span;
    long bins;
    char extra;
    if (std::sscanf(spec.c_str(), "%lf,%lf,%ld%c", &center, &span, &bins, &extra) != 3 || bins < 1)
        throw config_error("--grid expects center,span,bins; got '" + spec + "'");
    return make_grid(center, span, static_cast<std::size_t>(bins));
}

struct ModelFlags {
    std::string model = "gbm";
    double horizon = 1.0;
    std::size_t steps = 256;
    std::size_t paths = 1 << 14;
    std::uint64_t seed = 1;
    double x0 = 100.0;
    double vol = 0.2;
    double rate = 0.0;
    double dividend = 0.0;
    double kappa = 0.0;
    bool antithetic = false;
    std::string grid_spec;
    double alpha = 2.1, beta = 1.2, gamma = 1.9;  // Guyon toy parameters
    std::string lov_config;
    int threads = 0;

    void add_to(CLI::App* cmd, bool with_model_choice = true) {
        if (with_model_choice)
            cmd->add_option("--model", model, "model: bm, gbm, guyon, lov")
                ->check(CLI::IsMember({"bm", "gbm", "guyon", "lov"}));
        cmd->add_option("--t", horizon, "horizon in years");
        cmd->add_option("--steps", steps, "time steps");
        cmd->add_option("--paths", paths, "Monte Carlo paths");
        cmd->add_option("--seed", seed, "RNG seed (OCCFLOW_SEED overrides)");
        cmd->add_option("--x0", x0, "initial level");
        cmd->add_option("--vol", vol, "constant volatility (gbm)");
        cmd->add_option("--r", rate, "interest rate");
        cmd->add_option("--q", dividend, "dividend yield");
        cmd->add_option("--kappa", kappa, "exponential clock rate");
        cmd->add_flag("--antithetic", antithetic, "antithetic sampling");
        cmd->add_option("--grid", grid_spec, "occupation grid center,span,bins");
        cmd->add_option("--alpha", alpha, "guyon alpha");
        cmd->add_option("--beta", beta, "guyon beta");
        cmd->add_option("--gamma", gamma, "guyon gamma");
        cmd->add_option("--config", lov_config, "LOV config key file (model lov)");
        cmd->add_option("--threads", threads, "worker threads (0 = machine parallelism)");
    }

    GridPtr grid() const {
        if (!grid_spec.empty()) return parse_grid(grid_spec);
        return make_grid(x0, std::max(0.8 * x0, 1.0), 201);
    }

    void echo(Settings& s) const {
        s.set("model", model);
        s.set("t", horizon);
        s.set("steps", static_cast<std::uint64_t>(steps));
        s.set("paths", static_cast<std::uint64_t>(paths));
        s.set("x0", x0);
        s.set("r", rate);
        s.set("q", dividend);
        s.set("kappa", kappa);
        s.set("antithetic", antithetic ? "true" : "false");
        s.set("threads", static_cast<std::uint64_t>(threads));
        if (model == "gbm") s.set("vol", vol);
        if (model == "guyon") {
            s.set("alpha", alpha);
            s.set("beta", beta);
            s.set("gamma", gamma);
        }
    }
};

// ---- LOV config file ------------------------------------------------------

struct LovFileConfig {
    LovConfig lov;
    double grid_center = 100.0, grid_span = 80.0;
    std::size_t grid_bins = 201;
    std::map<std::string, std::string> raw;
};

LovFileConfig load_lov_config(const std::string& path) {
    const KeyFile kf = KeyFile::parse_file(path);
    kf.reject_unknown_keys({"sigma_loc_const", "sigma_loc_csv", "ell.kind", "ell.beta", "ell.lo",
                            "ell.hi", "ell.alpha", "kappa", "multiplicative", "bandwidth.kappa_b",
                            "bandwidth.exponent", "var_floor", "grid.center", "grid.span",
                            "grid.bins"});
    LovFileConfig out;
    out.raw = kf.entries();
    if (kf.has("sigma_loc_csv"))
        out.lov.sigma_loc = LocalVolTable::from_csv(kf.get_string("sigma_loc_csv"));
    else
        out.lov.sigma_loc = LocalVolTable::constant(kf.get_double("sigma_loc_const", 0.2));

    const std::string kind = kf.get_string("ell.kind", "zero");
    if (kind == "zero")
        out.lov.ell = SensitivityFunction::zero();
    else if (kind == "one_factor")
        out.lov.ell = SensitivityFunction::one_factor(kf.get_double("ell.beta"),
                                                      kf.get_double("ell.lo"),
                                                      kf.get_double("ell.hi"));
    else if (kind == "ema")
        out.lov.ell = SensitivityFunction::ema(kf.get_double("ell.beta"));
    else if (kind == "tanh")
        out.lov.ell =
            SensitivityFunction::tanh_moneyness(kf.get_double("ell.alpha", 1.0), out.lov.sigma_loc);
    else
        throw config_error("lov config: ell.kind must be zero|one_factor|ema|tanh");

    out.lov.kappa = kf.get_double("kappa", 0.0);
    out.lov.multiplicative = kf.get_bool("multiplicative", false);
    out.lov.bandwidth_kappa = kf.get_double("bandwidth.kappa_b", 1.5);
    out.lov.bandwidth_exponent = kf.get_double("bandwidth.exponent", 0.2);
    out.lov.var_floor = kf.get_double("var_floor", 1e-8);
    out.grid_center = kf.get_double("grid.center", 100.0);
    out.grid_span = kf.get_double("grid.span", 80.0);
    out.grid_bins = static_cast<std::size_t>(kf.get_int("grid.bins", 201));
    return out;
}

// ---- simulate / lov-sim ---------------------------------------------------

PathEnsemble run_model(const ModelFlags& mf, Settings& settings, bool store_paths,
                       Clock::Kind clock_kind) {
    SimConfig cfg;
    cfg.horizon = mf.horizon;
    cfg.n_steps = mf.steps;
    cfg.n_paths = mf.paths;
    cfg.seed = effective_seed(mf.seed);
    cfg.antithetic = mf.antithetic;
    cfg.rate = mf.rate;
    cfg.dividend = mf.dividend;
    cfg.x0 = mf.x0;
    cfg.store_paths = store_paths;
    cfg.threads = mf.threads;
    cfg.clock = clock_kind == Clock::Kind::quadratic_variation ? Clock::quadratic_variation()
             : clock_kind == Clock::Kind::exponential          ? Clock::exponential(mf.kappa)
                                                                : Clock::calendar();

    if (mf.model == "lov") {
        if (mf.lov_config.empty()) throw config_error("model lov requires --config");
        LovFileConfig lc = load_lov_config(mf.lov_config);
        cfg.grid = make_grid(lc.grid_center, lc.grid_span, lc.grid_bins);
        for (const auto& [k, v] : lc.raw) settings.set("lov." + k, v);
        LovSimResult res = simulate_lov(cfg, lc.lov);
        if (!res.positivity.pass)
            std::cerr << "warning: positivity guard fails (worst margin "
                      << res.positivity.worst_margin << "); variance flooring may occur\n";
        if (res.floor_events > 0)
            std::cerr << "warning: " << res.floor_events << " variance flooring events\n";
        return std::move(res.ensemble);
    }

    cfg.grid = mf.grid();
    if (mf.model == "gbm") return euler_occupied(cfg, constant_vol(mf.vol));
    if (mf.model == "guyon") {
        cfg.clock = Clock::exponential(mf.kappa);
        return euler_occupied(cfg, GuyonToyVol{mf.alpha, mf.beta, mf.gamma, mf.x0});
    }
    throw config_error("run_model: unsupported model " + mf.model);
}

void write_paths_csv(const PathEnsemble& ens, Settings& settings, const std::string& out_path) {
    CsvWriter w = settings.writer(ens.config.seed);
    w.set_columns({"path", "step", "time", "level", "vol"});
    for (std::size_t j = 0; j < ens.size(); ++j) {
        const OccupiedPath& p = ens.paths[j];
        for (std::size_t n = 0; n < p.levels.size(); ++n)
            w.add_row({static_cast<double>(j), static_cast<double>(n), p.times[n], p.levels[n],
                       n < p.vols.size() ? p.vols[n] : 0.0});
    }
    w.write_file(out_path);
}

int cmd_simulate(const ModelFlags& mf, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    Settings settings;
    settings.set("command", "simulate");
    mf.echo(settings);

    if (mf.model == "bm") {
        SimConfig cfg;
        cfg.horizon = mf.horizon;
        cfg.n_steps = mf.steps;
        cfg.n_paths = mf.paths;
        cfg.seed = effective_seed(mf.seed);
        cfg.antithetic = mf.antithetic;
        cfg.x0 = mf.x0;
        cfg.threads = mf.threads;
        const auto paths = simulate_bm(cfg);
        CsvWriter w = settings.writer(cfg.seed);
        w.set_columns({"path", "step", "time", "level", "vol"});
        const double dt = cfg.dt();
        for (std::size_t j = 0; j < paths.size(); ++j)
            for (std::size_t n = 0; n < paths[j].size(); ++n)
                w.add_row({static_cast<double>(j), static_cast<double>(n),
                           dt * static_cast<double>(n), paths[j][n], 1.0});
        w.write_file(out_path);
        std::printf("simulate bm: %zu paths x %zu steps -> %s  [%.2fs]\n", cfg.n_paths, cfg.n_steps,
                    out_path.c_str(), elapsed_since(t0));
        return 0;
    }

    PathEnsemble ens = run_model(mf, settings, true, Clock::Kind::exponential);
    write_paths_csv(ens, settings, out_path);
    std::printf("simulate %s: %zu paths x %zu steps -> %s  [%.2fs]\n", mf.model.c_str(),
                ens.config.n_paths, ens.config.n_steps, out_path.c_str(), elapsed_since(t0));
    return 0;
}

// ---- price ----------------------------------------------------------------

PayoffSpec load_payoff(const std::string& path, std::string& name) {
    const KeyFile kf = KeyFile::parse_file(path);
    kf.reject_unknown_keys({"kind", "strike", "corridor_lo", "corridor_hi", "coupon", "barrier",
                            "window", "budget"});
    name = kf.get_string("kind");
    if (name == "asian") return AsianFloatingCall{};
    if (name == "lookback") return LookbackFloatingCall{};
    if (name == "range_accrual")
        return RangeAccrual{kf.get_double("corridor_lo"), kf.get_double("corridor_hi"),
                            kf.get_double("coupon", 1.0)};
    if (name == "parisian")
        return ParisianUpOutAssetOrNothing{kf.get_double("barrier"), kf.get_double("window")};
    if (name == "corridor_var")
        return CorridorVarFloatingLeg{kf.get_double("corridor_lo"), kf.get_double("corridor_hi")};
    if (name == "timer") return TimerCall{kf.get_double("budget"), kf.get_double("strike")};
    if (name == "vanilla_call") return VanillaCall{kf.get_double("strike")};
    if (name == "vanilla_put") return VanillaPut{kf.get_double("strike")};
    throw config_error("payoff: unknown kind '" + name + "'");
}

int cmd_price(const ModelFlags& mf, const std::string& payoff_path, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    Settings settings;
    settings.set("command", "price");
    mf.echo(settings);

    std::string payoff_name;
    const PayoffSpec spec = load_payoff(payoff_path, payoff_name);
    settings.set("payoff", payoff_name);
    const Clock::Kind clock = required_clock(spec);
    // occupation-driven models run on their own clock; keep the paths and
    // rebuild the payoff-clock occupation afterwards
    const bool occupation_model = mf.model != "gbm" && mf.model != "bm";
    const bool needs_paths = std::holds_alternative<TimerCall>(spec) || occupation_model;

    PathEnsemble ens = run_model(mf, settings, needs_paths, clock);
    const Clock payoff_clock = clock == Clock::Kind::quadratic_variation
                                   ? Clock::quadratic_variation()
                                   : Clock::calendar();
    if (ens.config.clock.kind != payoff_clock.kind ||
        ens.config.clock.kappa != payoff_clock.kappa) {
        for (OccupiedPath& p : ens.paths)
            p.occupation =
                occupation_from_path(p.times, p.levels, payoff_clock, ens.config.grid, p.vols);
        ens.config.clock = payoff_clock;
    }
    PriceEstimate est;
    if (const TimerCall* timer = std::get_if<TimerCall>(&spec)) {
        const TimerPrice tp = timer_price_mc(*timer, ens);
        est = tp.estimate;
        settings.set("budget_not_reached", static_cast<std::uint64_t>(tp.budget_not_reached));
    } else {
        est = mc_price(spec, ens, mf.rate, mf.horizon);
    }

    CsvWriter w = settings.writer(ens.config.seed);
    w.set_columns({"payoff", "value", "stderr", "n_paths", "seed"});
    w.add_row_mixed({payoff_name, format_double(est.value), format_double(est.stderror),
                     std::to_string(est.n_paths), std::to_string(ens.config.seed)});
    w.write_file(out_path);
    std::printf("price %s: %.6g +- %.3g  [%.2fs]\n", payoff_name.c_str(), est.value, est.stderror,
                elapsed_since(t0));
    return 0;
}

// ---- replicate --------------------------------------------------------------

int cmd_replicate(const std::string& quotes_path, const std::string& corridor_spec,
                  double maturity, double spot, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    double x1, x2;
    char extra;
    if (std::sscanf(corridor_spec.c_str(), "%lf,%lf%c", &x1, &x2, &extra) != 2)
        throw config_error("--corridor expects x1,x2");

    const auto quotes = read_quotes_csv(quotes_path);
    // mid prices of the quoted maturity, interpolated linearly in strike
    std::map<double, double> mids;
    for (const QuoteRow& q : quotes)
        if (std::abs(q.maturity - maturity) < 1e-9) mids[q.strike] = q.mid();
    if (mids.size() < 2) throw config_error("replicate: no quotes at the requested maturity");

    OtmSurface surface;
    for (const auto& [k, _] : mids) surface.strikes.push_back(k);
    surface.price = [mids](double k, double) {
        auto hi = mids.lower_bound(k);
        if (hi == mids.begin()) return hi->second;
        if (hi == mids.end()) return std::prev(hi)->second;
        auto lo = std::prev(hi);
        const double w = (k - lo->first) / (hi->first - lo->first);
        return (1.0 - w) * lo->second + w * hi->second;
    };

    const double value = bl_occupation_strike(surface, x1, x2, maturity);

    Settings settings;
    settings.set("command", "replicate");
    settings.set("quotes", quotes_path);
    settings.set("corridor_lo", x1);
    settings.set("corridor_hi", x2);
    settings.set("maturity", maturity);
    settings.set("spot", spot);
    CsvWriter w = settings.writer(0);
    w.set_columns({"corridor_lo", "corridor_hi", "maturity", "expected_occupation"});
    w.add_row({x1, x2, maturity, value});
    w.write_file(out_path);
    std::printf("replicate: corridor [%g, %g] T=%g -> expected occupation %.6g  [%.2fs]\n", x1, x2,
                maturity, value, elapsed_since(t0));
    return 0;
}

// ---- stop -------------------------------------------------------------------

int cmd_stop(const std::string& method, double t_ex, double iota, std::size_t m_bar,
             double maturity, std::size_t steps, std::size_t paths, std::size_t paths_offline,
             double eps, std::uint64_t seed_flag, int threads, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(seed_flag);

    Settings settings;
    settings.set("command", "stop");
    settings.set("method", method);
    settings.set("T", maturity);
    settings.set("steps", static_cast<std::uint64_t>(steps));
    settings.set("paths", static_cast<std::uint64_t>(paths));
    settings.set("eps", eps);
    settings.set("threads", static_cast<std::uint64_t>(threads));

    stopping::StoppingResult res;
    std::string param_name, param_value;
    if (method == "two-date") {
        settings.set("t", t_ex);
        res = stopping::two_date_value(maturity, t_ex, steps, eps, paths, seed, nullptr, threads);
        param_name = "t";
        param_value = format_double(t_ex);
    } else if (method == "inspection") {
        settings.set("iota", iota);
        res = stopping::inspection_value(iota, maturity, steps, eps, paths, seed, {}, nullptr,
                                         threads);
        param_name = "iota";
        param_value = format_double(iota);
    } else if (method == "lsmc") {
        settings.set("mbar", static_cast<std::uint64_t>(m_bar));
        settings.set("paths_offline", static_cast<std::uint64_t>(paths_offline));
        res = stopping::lsmc_value(m_bar, steps, paths_offline, paths, maturity, seed);
        param_name = "mbar";
        param_value = std::to_string(m_bar);
    } else {
        throw config_error("stop: method must be two-date|inspection|lsmc");
    }

    const double runtime = elapsed_since(t0);
    CsvWriter w = settings.writer(seed);
    w.set_columns({"method", param_name, "value", "mc_error", "runtime_sec"});
    w.add_row_mixed({method, param_value, format_double(res.value), format_double(res.stderror),
                     format_double(runtime)});
    w.write_file(out_path);
    std::printf("stop %s %s=%s: %.4f +- %.4f  [%.2fs]\n", method.c_str(), param_name.c_str(),
                param_value.c_str(), res.value, res.stderror, runtime);
    return 0;
}

// ---- converge-eps -----------------------------------------------------------

int cmd_converge_eps(const std::string& eps_list, const std::string& strategy, double iota,
                     double maturity, std::size_t steps, std::size_t paths,
                     std::uint64_t seed_flag, int threads, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(seed_flag);

    std::vector<double> eps_values;
    std::stringstream ss(eps_list);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) eps_values.push_back(std::stod(tok));
    if (eps_values.empty()) throw config_error("converge-eps: empty --eps list");

    const auto strat = strategy == "european" ? stopping::SweepStrategy::european
                                              : stopping::SweepStrategy::inspection;
    if (strategy != "european" && strategy != "inspection")
        throw config_error("converge-eps: strategy must be european|inspection");

    const auto rows = stopping::eps_sweep(strat, eps_values, maturity, steps, paths, seed, iota,
                                          {}, nullptr, threads);

    Settings settings;
    settings.set("command", "converge-eps");
    settings.set("strategy", strategy);
    settings.set("iota", iota);
    settings.set("T", maturity);
    settings.set("steps", static_cast<std::uint64_t>(steps));
    settings.set("paths", static_cast<std::uint64_t>(paths));
    settings.set("threads", static_cast<std::uint64_t>(threads));
    CsvWriter w = settings.writer(seed);
    w.set_columns({"eps", "value", "stderr", "analytic"});
    for (const auto& r : rows) w.add_row({r.eps, r.value, r.stderror, r.analytic});
    w.write_file(out_path);
    std::printf("converge-eps %s: %zu corridor widths -> %s  [%.2fs]\n", strategy.c_str(),
                rows.size(), out_path.c_str(), elapsed_since(t0));
    return 0;
}

// ---- reproduce --------------------------------------------------------------

int cmd_reproduce(const std::string& target, std::uint64_t seed_flag, const std::string& out_path) {
    namespace ref = occflow::reference;
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(seed_flag);

    Settings settings;
    settings.set("command", "reproduce");
    settings.set("target", target);
    settings.set("T", ref::kMaturity);
    settings.set("steps", static_cast<std::uint64_t>(ref::kSteps));
    settings.set("eps", ref::kCorridorEps);
    settings.set("tolerance", ref::kValueTolerance);
    CsvWriter w = settings.writer(seed);

    struct Row {
        std::string label;
        double value, mc_error, reference, tolerance, runtime;
        bool pass;
    };
    std::vector<Row> rows;

    if (target == "table1") {
        auto r1 = std::chrono::steady_clock::now();
        const auto td = stopping::two_date_value(ref::kMaturity, ref::kTwoDateT, ref::kSteps,
                                                 ref::kCorridorEps, ref::kPathsOnline, seed);
        rows.push_back({"two-date t=0.5", td.value, td.stderror, ref::kTwoDateValue,
                        ref::kValueTolerance,
                        elapsed_since(r1),
                        std::abs(td.value - ref::kTwoDateValue) <= ref::kValueTolerance});
        const double eu = stopping::analytic_euro_value(ref::kMaturity);
        rows.push_back({"terminal only", eu, 0.0, ref::kEuropeanValue, 5e-5, 0.0,
                        std::abs(eu - ref::kEuropeanValue) <= 5e-5});
    } else if (target == "table2") {
        for (const auto& row : ref::kInspection) {
            auto r1 = std::chrono::steady_clock::now();
            const auto res = stopping::inspection_value(row.iota, ref::kMaturity, ref::kSteps,
                                                        ref::kCorridorEps, ref::kPathsOnline, seed);
            rows.push_back({"inspection iota=" + format_double(row.iota), res.value, res.stderror,
                            row.value, ref::kValueTolerance, elapsed_since(r1),
                            std::abs(res.value - row.value) <= ref::kValueTolerance});
        }
    } else if (target == "table3") {
        for (const auto& row : ref::kLsmc) {
            auto r1 = std::chrono::steady_clock::now();
            const auto res = stopping::lsmc_value(row.m_bar, ref::kSteps, ref::kPathsOffline,
                                                  ref::kPathsOnline, ref::kMaturity, seed);
            rows.push_back({"lsmc mbar=" + std::to_string(row.m_bar), res.value, res.stderror,
                            row.value, ref::kValueTolerance, elapsed_since(r1),
                            std::abs(res.value - row.value) <= ref::kValueTolerance});
        }
    } else if (target == "eps-curve") {
        std::vector<double> eps(std::begin(ref::kEpsCurve), std::end(ref::kEpsCurve));
        const auto curve = stopping::eps_sweep(stopping::SweepStrategy::inspection, eps,
                                               ref::kMaturity, ref::kSteps, ref::kPathsOnline,
                                               seed, 0.7);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            bool pass = true;
            if (i > 0) {
                const double tol = 3.0 * std::hypot(curve[i].stderror, curve[i - 1].stderror);
                pass = curve[i].value <= curve[i - 1].value + tol;
            }
            rows.push_back({"inspection eps=" + format_double(curve[i].eps), curve[i].value,
                            curve[i].stderror, curve[i].value, 0.0, 0.0, pass});
        }
    } else {
        throw config_error("reproduce: target must be table1|table2|table3|eps-curve");
    }

    w.set_columns({"row", "value", "mc_error", "reference", "tolerance", "runtime_sec", "status"});
    bool all_pass = true;
    for (const Row& r : rows) {
        w.add_row_mixed({r.label, format_double(r.value), format_double(r.mc_error),
                         format_double(r.reference), format_double(r.tolerance),
                         format_double(r.runtime), r.pass ? "pass" : "fail"});
        all_pass = all_pass && r.pass;
    }
    w.write_file(out_path);

    for (const Row& r : rows)
        std::printf("%-22s %8.4f +- %.4f  ref %8.4f  %s\n", r.label.c_str(), r.value, r.mc_error,
                    r.reference, r.pass ? "pass" : "FAIL");
    std::printf("reproduce %s: %s  [%.2fs]\n", target.c_str(), all_pass ? "all rows pass" : "FAILURES",
                elapsed_since(t0));
    if (!all_pass) {
        std::cerr << "reproduce " << target << ": reference mismatch, see " << out_path << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"occflow: Monte Carlo engine for occupied processes"};
    app.set_version_flag("--version", std::string("occflow ") + occflow::kVersion);
    app.require_subcommand(1);

    ModelFlags sim_flags;
    std::string sim_out = "paths.csv";
    CLI::App* sim = app.add_subcommand("simulate", "simulate model paths to CSV");
    sim_flags.add_to(sim);
    sim->add_option("--out", sim_out, "output CSV");

    ModelFlags price_flags;
    std::string price_payoff, price_out = "result.csv";
    CLI::App* price = app.add_subcommand("price", "Monte Carlo price an occupation payoff");
    price_flags.add_to(price);
    price->add_option("--payoff", price_payoff, "payoff key file")->required();
    price->add_option("--out", price_out, "output CSV");

    std::string rep_quotes, rep_corridor;
    double rep_maturity = 1.0, rep_spot = 100.0;
    std::string rep_out = "replication.csv";
    CLI::App* rep = app.add_subcommand("replicate", "static replication of occupation strikes");
    rep->add_option("--quotes", rep_quotes, "quotes CSV (strike,maturity,type,bid,ask)")->required();
    rep->add_option("--corridor", rep_corridor, "corridor x1,x2")->required();
    rep->add_option("--maturity", rep_maturity, "maturity T");
    rep->add_option("--spot", rep_spot, "spot level");
    rep->add_option("--out", rep_out, "output CSV");

    ModelFlags lov_flags;
    lov_flags.model = "lov";
    std::string lov_out = "ensemble.csv";
    CLI::App* lovsim = app.add_subcommand("lov-sim", "simulate the local occupied volatility model");
    lov_flags.add_to(lovsim, false);
    lovsim->add_option("--out", lov_out, "output CSV");

    std::string stop_method = "two-date", stop_out = "table.csv";
    double stop_t = 0.5, stop_iota = 0.7, stop_T = 1.0, stop_eps = 0.05;
    std::size_t stop_mbar = 0, stop_steps = 400, stop_paths = 1 << 14, stop_paths_off = 1 << 11;
    std::uint64_t stop_seed = 42;
    int stop_threads = 0;
    CLI::App* stop = app.add_subcommand("stop", "spot local time stopping experiments");
    stop->add_option("--method", stop_method, "two-date|inspection|lsmc")->required();
    stop->add_option("--t", stop_t, "two-date exercise date");
    stop->add_option("--iota", stop_iota, "inspection date");
    stop->add_option("--mbar", stop_mbar, "LSMC truncation radius");
    stop->add_option("--T", stop_T, "horizon");
    stop->add_option("--steps", stop_steps, "time steps");
    stop->add_option("--paths", stop_paths, "paths (online phase for lsmc)");
    stop->add_option("--paths-offline", stop_paths_off, "LSMC offline paths");
    stop->add_option("--eps", stop_eps, "corridor half width");
    stop->add_option("--seed", stop_seed, "RNG seed (OCCFLOW_SEED overrides)");
    stop->add_option("--threads", stop_threads, "worker threads (0 = machine parallelism)");
    stop->add_option("--out", stop_out, "output CSV");

    std::string conv_eps = "0.01,0.02,0.05,0.1,0.2", conv_strategy = "inspection";
    std::string conv_out = "curve.csv";
    double conv_iota = 0.7, conv_T = 1.0;
    std::size_t conv_steps = 400, conv_paths = 1 << 14;
    std::uint64_t conv_seed = 42;
    int conv_threads = 0;
    CLI::App* conv = app.add_subcommand("converge-eps", "corridor-width convergence curve");
    conv->add_option("--eps", conv_eps, "comma-separated eps list");
    conv->add_option("--strategy", conv_strategy, "european|inspection");
    conv->add_option("--iota", conv_iota, "inspection date");
    conv->add_option("--T", conv_T, "horizon");
    conv->add_option("--steps", conv_steps, "time steps");
    conv->add_option("--paths", conv_paths, "paths");
    conv->add_option("--seed", conv_seed, "RNG seed (OCCFLOW_SEED overrides)");
    conv->add_option("--threads", conv_threads, "worker threads (0 = machine parallelism)");
    conv->add_option("--out", conv_out, "output CSV");

    std::string repro_target, repro_out = "reproduce.csv";
    std::uint64_t repro_seed = 42;
    CLI::App* repro = app.add_subcommand("reproduce", "rerun the published stopping experiments");
    repro->add_option("target", repro_target, "table1|table2|table3|eps-curve")->required();
    repro->add_option("--seed", repro_seed, "RNG seed (OCCFLOW_SEED overrides)");
    repro->add_option("--out", repro_out, "output CSV");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_flags, sim_out);
        if (price->parsed()) return cmd_price(price_flags, price_payoff, price_out);
        if (rep->parsed())
            return cmd_replicate(rep_quotes, rep_corridor, rep_maturity, rep_spot, rep_out);
        if (lovsim->parsed()) {
            Settings settings;
            settings.set("command", "lov-sim");
            lov_flags.echo(settings);
            PathEnsemble ens = run_model(lov_flags, settings, true, Clock::Kind::exponential);
            write_paths_csv(ens, settings, lov_out);
            std::printf("lov-sim: %zu paths x %zu steps -> %s\n", ens.config.n_paths,
                        ens.config.n_steps, lov_out.c_str());
            return 0;
        }
        if (stop->parsed())
            return cmd_stop(stop_method, stop_t, stop_iota, stop_mbar, stop_T, stop_steps,
                            stop_paths, stop_paths_off, stop_eps, stop_seed, stop_threads,
                            stop_out);
        if (conv->parsed())
            return cmd_converge_eps(conv_eps, conv_strategy, conv_iota, conv_T, conv_steps,
                                    conv_paths, conv_seed, conv_threads, conv_out);
        if (repro->parsed()) return cmd_reproduce(repro_target, repro_seed, repro_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const occflow::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
