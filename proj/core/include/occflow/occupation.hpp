#pragma once

#include "occflow/corridor_grid.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace occflow {

// Corridor query for the local-time estimate O(B_eps(x)) / (2 eps).
struct LocalTimeQuery {
    double level = 0.0;
    double half_width = 0.0;  // eps > 0, price units; eps ~ sqrt(dt) on Brownian scale
};

// Level function for occupation integrals. Constant and identity integrands
// route through the exact side-accumulators instead of the bins.
class LevelFn {
public:
    static LevelFn constant(double c) { return LevelFn(Kind::constant, c, {}); }
    static LevelFn identity() { return LevelFn(Kind::identity, 0.0, {}); }
    static LevelFn of(std::function<double(double)> f) {
        return LevelFn(Kind::custom, 0.0, std::move(f));
    }

    enum class Kind { constant, identity, custom };
    Kind kind() const { return kind_; }
    double constant_value() const { return c_; }
    double operator()(double x) const;

private:
    LevelFn(Kind k, double c, std::function<double(double)> f)
        : kind_(k), c_(c), f_(std::move(f)) {}
    Kind kind_;
    double c_;
    std::function<double(double)> f_;
};

// Binned occupation measure on a corridor grid. Bin masses carry the clock
// units; total mass, first moment and the visited range are tracked by exact
// side-accumulators so linear and extremal functionals are bin-free.
class DiscreteOccupation {
public:
    explicit DiscreteOccupation(GridPtr grid);
    // Seeds the range accumulator with the starting level (supp at time zero
    // is the singleton {x0}); adds no mass.
    DiscreteOccupation(GridPtr grid, double x0);

    const CorridorGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

    std::span<const double> masses() const { return masses_; }
    std::span<double> mutable_masses() { return masses_; }
    double mass(std::size_t m) const { return masses_[m]; }

    double total_mass() const { return total_mass_; }
    double first_moment() const { return first_moment_; }
    bool empty() const { return total_mass_ == 0.0; }

    // Adds weight at level x: bin(x) += w, exact accumulators updated, range
    // extended with the true (unclamped) level. Zero weight is a no-op.
    void accumulate(double level, double weight);

    // Bin-wise sum with another occupation on the same grid.
    void merge(const DiscreteOccupation& other);

    // Exact running (min, max) of accumulated levels, not bin edges.
    std::pair<double, double> support_bounds() const;

    // Mass of (lo, hi) with partial bins pro-rated uniformly. A corridor
    // covering the whole grid span returns the exact total-mass accumulator.
    double mass_in(double lo, double hi) const;

    // O(B_eps(x)) / (2 eps).
    double local_time(const LocalTimeQuery& q) const;
    double local_time(double level, double eps) const {
        return local_time(LocalTimeQuery{level, eps});
    }

    // Exponentially/first-moment weighted average level: first_moment / total_mass.
    double barycenter() const;

    void serialize_csv(std::ostream& os) const;

private:
    GridPtr grid_;
    std::vector<double> masses_;
    double total_mass_ = 0.0;
    double first_moment_ = 0.0;
    bool has_range_ = false;
    double min_level_ = 0.0;
    double max_level_ = 0.0;
};

// Spot local time: the density estimate evaluated at the current level. This
// is the stopping reward, hence its own name.
double spot_local_time(const DiscreteOccupation& occ, double spot, double eps);

// sum_m phi(x_m) O_m, with exact shortcuts for constant and identity phi.
double occupation_integral(const DiscreteOccupation& occ, const LevelFn& phi);

// m_1 (total variation on bins) or m_inf (sup of per-bin density differences).
enum class MetricOrder { tv, sup_density };
double metric(const DiscreteOccupation& a, const DiscreteOccupation& b, MetricOrder p);

}  // namespace occflow
