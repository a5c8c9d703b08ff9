#pragma once

#include <string>
#include <vector>

namespace occflow {

// Local volatility table sigma_loc(t, x): bilinear interpolation on a
// rectangular (time, level) grid with flat extrapolation outside it.
class LocalVolTable {
public:
    LocalVolTable(std::vector<double> times, std::vector<double> levels,
                  std::vector<double> vols);  // vols row-major, times x levels

    static LocalVolTable constant(double sigma);

    // Rows "t,x,vol" (header optional); the (t, x) pairs must fill a grid.
    static LocalVolTable from_csv(const std::string& path);

    double operator()(double t, double x) const;
    double variance(double t, double x) const {
        const double v = (*this)(t, x);
        return v * v;
    }

    double min_vol() const { return min_vol_; }

private:
    std::vector<double> times_, levels_, vols_;
    double min_vol_ = 0.0;

    double at(std::size_t i, std::size_t j) const { return vols_[i * levels_.size() + j]; }
};

}  // namespace occflow
