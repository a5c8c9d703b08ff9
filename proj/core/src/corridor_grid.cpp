#include "occflow/corridor_grid.hpp"

#include "occflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace occflow {

CorridorGrid::CorridorGrid(std::vector<double> nodes, double left_half_width,
                           double right_half_width)
    : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw config_error("CorridorGrid: no nodes");
    if (left_half_width <= 0.0 || right_half_width <= 0.0)
        throw config_error("CorridorGrid: boundary half-widths must be positive");
    for (std::size_t m = 1; m < nodes_.size(); ++m)
        if (!(nodes_[m] > nodes_[m - 1]))
            throw config_error("CorridorGrid: nodes must be strictly increasing");

    edges_.resize(nodes_.size() + 1);
    edges_.front() = nodes_.front() - left_half_width;
    edges_.back() = nodes_.back() + right_half_width;
    for (std::size_t m = 1; m < nodes_.size(); ++m)
        edges_[m] = 0.5 * (nodes_[m - 1] + nodes_[m]);

    if (nodes_.size() >= 2) {
        spacing_ = nodes_[1] - nodes_[0];
        uniform_ = true;
        for (std::size_t m = 1; m + 1 < nodes_.size(); ++m) {
            const double d = nodes_[m + 1] - nodes_[m];
            if (std::abs(d - spacing_) > 1e-12 * std::abs(spacing_)) {
                uniform_ = false;
                break;
            }
        }
    }
}

std::size_t CorridorGrid::bin_of(double x) const {
    const std::size_t m_max = nodes_.size() - 1;
    if (uniform_) {
        // Bin m covers [edges_[m], edges_[m+1]); interior edges sit halfway
        // between nodes, so rounding the node index gives the half-open rule.
        const double u = (x - nodes_.front()) / spacing_;
        if (u <= 0.0) return 0;
        const double idx = std::floor(u + 0.5);
        if (idx >= static_cast<double>(m_max)) return m_max;
        return static_cast<std::size_t>(idx);
    }
    // Bin index = number of interior edges <= x.
    auto it = std::upper_bound(edges_.begin() + 1, edges_.end() - 1, x);
    return static_cast<std::size_t>(it - (edges_.begin() + 1));
}

bool CorridorGrid::same_grid(const CorridorGrid& other) const {
    if (this == &other) return true;
    return nodes_ == other.nodes_ && edges_ == other.edges_;
}

GridPtr make_grid(double center, double half_span, std::size_t n_bins) {
    if (half_span <= 0.0) throw config_error("make_grid: half_span must be positive");
    if (n_bins == 0 || n_bins % 2 == 0)
        throw config_error("make_grid: n_bins must be odd and positive");

    if (n_bins == 1)
        return std::make_shared<CorridorGrid>(std::vector<double>{center}, half_span, half_span);

    const double spacing = 2.0 * half_span / static_cast<double>(n_bins - 1);
    std::vector<double> nodes(n_bins);
    for (std::size_t m = 0; m < n_bins; ++m)
        nodes[m] = center - half_span + spacing * static_cast<double>(m);
    return std::make_shared<CorridorGrid>(std::move(nodes), 0.5 * spacing, 0.5 * spacing);
}

}  // namespace occflow
