#include "occflow/occupation.hpp"

#include "occflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace occflow {

double LevelFn::operator()(double x) const {
    switch (kind_) {
        case Kind::constant: return c_;
        case Kind::identity: return x;
        case Kind::custom: return f_(x);
    }
    return 0.0;
}

DiscreteOccupation::DiscreteOccupation(GridPtr grid)
    : grid_(std::move(grid)), masses_(grid_->size(), 0.0) {
    if (!grid_) throw config_error("DiscreteOccupation: null grid");
}

DiscreteOccupation::DiscreteOccupation(GridPtr grid, double x0) : DiscreteOccupation(std::move(grid)) {
    has_range_ = true;
    min_level_ = max_level_ = x0;
}

void DiscreteOccupation::accumulate(double level, double weight) {
    if (weight < 0.0) throw domain_error("accumulate: negative clock weight");
    if (weight == 0.0) return;
    masses_[grid_->bin_of(level)] += weight;
    total_mass_ += weight;
    first_moment_ += level * weight;
    if (!has_range_) {
        has_range_ = true;
        min_level_ = max_level_ = level;
    } else {
        min_level_ = std::min(min_level_, level);
        max_level_ = std::max(max_level_, level);
    }
}

void DiscreteOccupation::merge(const DiscreteOccupation& other) {
    if (!grid_->same_grid(*other.grid_)) throw dimension_error("merge: grid mismatch");
    for (std::size_t m = 0; m < masses_.size(); ++m) masses_[m] += other.masses_[m];
    total_mass_ += other.total_mass_;
    first_moment_ += other.first_moment_;
    if (other.has_range_) {
        if (!has_range_) {
            has_range_ = true;
            min_level_ = other.min_level_;
            max_level_ = other.max_level_;
        } else {
            min_level_ = std::min(min_level_, other.min_level_);
            max_level_ = std::max(max_level_, other.max_level_);
        }
    }
}

std::pair<double, double> DiscreteOccupation::support_bounds() const {
    if (!has_range_) throw empty_support_error("support_bounds: empty occupation");
    return {min_level_, max_level_};
}

double DiscreteOccupation::mass_in(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    if (lo <= grid_->covered_lo() && hi >= grid_->covered_hi()) return total_mass_;

    const std::size_t first = grid_->bin_of(lo);
    const std::size_t last = grid_->bin_of(hi);
    double sum = 0.0;
    for (std::size_t m = first; m <= last; ++m) {
        if (masses_[m] == 0.0) continue;
        const double l = std::max(grid_->left_edge(m), lo);
        const double r = std::min(grid_->right_edge(m), hi);
        if (r <= l) continue;
        const double frac = (r - l) / grid_->width(m);
        sum += masses_[m] * (frac >= 1.0 ? 1.0 : frac);
    }
    return sum;
}

double DiscreteOccupation::local_time(const LocalTimeQuery& q) const {
    if (!(q.half_width > 0.0)) throw domain_error("local_time: eps must be positive");
    return mass_in(q.level - q.half_width, q.level + q.half_width) / (2.0 * q.half_width);
}

double DiscreteOccupation::barycenter() const {
    if (total_mass_ <= 0.0) throw empty_support_error("barycenter: zero total mass");
    return first_moment_ / total_mass_;
}

void DiscreteOccupation::serialize_csv(std::ostream& os) const {
    os << "node,mass\n";
    char buf[80];
    for (std::size_t m = 0; m < masses_.size(); ++m) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", grid_->node(m), masses_[m]);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "# total_mass=%.17g,first_moment=%.17g,", total_mass_,
                  first_moment_);
    os << buf;
    if (has_range_) {
        std::snprintf(buf, sizeof(buf), "min=%.17g,max=%.17g\n", min_level_, max_level_);
        os << buf;
    } else {
        os << "min=nan,max=nan\n";
    }
}

double spot_local_time(const DiscreteOccupation& occ, double spot, double eps) {
    return occ.local_time(LocalTimeQuery{spot, eps});
}

double occupation_integral(const DiscreteOccupation& occ, const LevelFn& phi) {
    switch (phi.kind()) {
        case LevelFn::Kind::constant: return phi.constant_value() * occ.total_mass();
        case LevelFn::Kind::identity: return occ.first_moment();
        case LevelFn::Kind::custom: break;
    }
    double sum = 0.0;
    const auto masses = occ.masses();
    for (std::size_t m = 0; m < masses.size(); ++m)
        if (masses[m] != 0.0) sum += phi(occ.grid().node(m)) * masses[m];
    return sum;
}

double metric(const DiscreteOccupation& a, const DiscreteOccupation& b, MetricOrder p) {
    if (!a.grid().same_grid(b.grid())) throw dimension_error("metric: grid mismatch");
    const auto ma = a.masses();
    const auto mb = b.masses();
    double acc = 0.0;
    for (std::size_t m = 0; m < ma.size(); ++m) {
        const double d = std::abs(ma[m] - mb[m]);
        if (p == MetricOrder::tv)
            acc += d;
        else
            acc = std::max(acc, d / a.grid().width(m));
    }
    return acc;
}

}  // namespace occflow
