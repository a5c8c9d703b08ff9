#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace occflow {

// Level partition {C_m} with nodes x_1 < ... < x_M and half-open bins
// C_m = [x_m - eps_{m-1}, x_m + eps_m), eps_m = (x_{m+1} - x_m)/2. Bin lookup
// is total: levels outside the covered span map to the nearest edge bin.
class CorridorGrid {
public:
    CorridorGrid(std::vector<double> nodes, double left_half_width, double right_half_width);

    std::size_t size() const { return nodes_.size(); }
    double node(std::size_t m) const { return nodes_[m]; }
    const std::vector<double>& nodes() const { return nodes_; }

    // Left/right edge and width of bin m. Edges are finite even for the edge
    // bins; out-of-span mass is clamped into them.
    double left_edge(std::size_t m) const { return edges_[m]; }
    double right_edge(std::size_t m) const { return edges_[m + 1]; }
    double width(std::size_t m) const { return edges_[m + 1] - edges_[m]; }

    double covered_lo() const { return edges_.front(); }
    double covered_hi() const { return edges_.back(); }

    // Total lookup; boundary levels go to the right bin.
    std::size_t bin_of(double x) const;

    bool same_grid(const CorridorGrid& other) const;

private:
    std::vector<double> nodes_;
    std::vector<double> edges_;  // size() + 1 entries
    bool uniform_ = false;
    double spacing_ = 0.0;
};

using GridPtr = std::shared_ptr<const CorridorGrid>;

// Equally spaced nodes spanning [center - half_span, center + half_span].
// n_bins must be odd so the center is a node; n_bins == 1 degenerates to a
// single bin covering [center - half_span, center + half_span).
GridPtr make_grid(double center, double half_span, std::size_t n_bins);

}  // namespace occflow
