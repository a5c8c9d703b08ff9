#include "occflow/local_vol.hpp"

#include "occflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace occflow {

LocalVolTable::LocalVolTable(std::vector<double> times, std::vector<double> levels,
                             std::vector<double> vols)
    : times_(std::move(times)), levels_(std::move(levels)), vols_(std::move(vols)) {
    if (times_.empty() || levels_.empty() || vols_.size() != times_.size() * levels_.size())
        throw config_error("LocalVolTable: grid/value size mismatch");
    if (!std::is_sorted(times_.begin(), times_.end()) ||
        !std::is_sorted(levels_.begin(), levels_.end()))
        throw config_error("LocalVolTable: grid axes must be sorted");
    min_vol_ = *std::min_element(vols_.begin(), vols_.end());
    if (min_vol_ <= 0.0) throw config_error("LocalVolTable: vols must be positive");
}

LocalVolTable LocalVolTable::constant(double sigma) {
    return LocalVolTable({0.0}, {0.0}, {sigma});
}

LocalVolTable LocalVolTable::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("LocalVolTable: cannot open " + path);
    std::set<double> tset, xset;
    std::map<std::pair<double, double>, double> cells;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw config_error("LocalVolTable: malformed row '" + line + "'");
        try {
            const double t = std::stod(a), x = std::stod(b), v = std::stod(c);
            tset.insert(t);
            xset.insert(x);
            cells[{t, x}] = v;
        } catch (const std::invalid_argument&) {
            if (cells.empty()) continue;  // header row
            throw config_error("LocalVolTable: malformed row '" + line + "'");
        }
    }
    std::vector<double> times(tset.begin(), tset.end());
    std::vector<double> levels(xset.begin(), xset.end());
    std::vector<double> vols;
    vols.reserve(times.size() * levels.size());
    for (double t : times)
        for (double x : levels) {
            auto it = cells.find({t, x});
            if (it == cells.end())
                throw config_error("LocalVolTable: (t,x) pairs do not fill a grid");
            vols.push_back(it->second);
        }
    return LocalVolTable(std::move(times), std::move(levels), std::move(vols));
}

namespace {

// Index i and weight w such that value = (1-w) g[i] + w g[i+1], flat outside.
std::pair<std::size_t, double> locate(const std::vector<double>& g, double v) {
    if (g.size() == 1 || v <= g.front()) return {0, 0.0};
    if (v >= g.back()) return {g.size() - 2, 1.0};
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), v) - g.begin()) - 1;
    return {i, (v - g[i]) / (g[i + 1] - g[i])};
}

}  // namespace

double LocalVolTable::operator()(double t, double x) const {
    const auto [i, wt] = locate(times_, t);
    const auto [j, wx] = locate(levels_, x);
    if (times_.size() == 1 && levels_.size() == 1) return vols_[0];
    if (times_.size() == 1) return (1.0 - wx) * at(0, j) + wx * at(0, j + 1);
    if (levels_.size() == 1) return (1.0 - wt) * at(i, 0) + wt * at(i + 1, 0);
    return (1.0 - wt) * ((1.0 - wx) * at(i, j) + wx * at(i, j + 1)) +
           wt * ((1.0 - wx) * at(i + 1, j) + wx * at(i + 1, j + 1));
}

}  // namespace occflow
