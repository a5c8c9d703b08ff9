#pragma once

#include <cstddef>

// Published reference values for the bundled reproduction experiments, kept
// in one place so every tolerance is auditable. All stopping experiments are
// driven Brownian motion started at zero with T = 1.

namespace occflow::reference {

inline constexpr double kMaturity = 1.0;
inline constexpr std::size_t kSteps = 400;          // regular time grid
inline constexpr double kCorridorEps = 0.05;        // eps = sqrt(T/N)
inline constexpr std::size_t kPathsOnline = 1 << 14;
inline constexpr std::size_t kPathsOffline = 1 << 11;
inline constexpr double kValueTolerance = 0.03;     // absolute, covers seed spread

// Two-date problem, exercise dates {0.5, 1}.
inline constexpr double kTwoDateT = 0.5;
inline constexpr double kTwoDateValue = 0.8455;
inline constexpr double kTwoDateMcError = 0.0050;

// Terminal-only exercise, analytic value sqrt(2/pi) printed at 4 decimals.
inline constexpr double kEuropeanValue = 0.7979;

// Inspection strategy values per inspection date.
struct InspectionRow {
    double iota;
    double value;
    double mc_error;
};
inline constexpr InspectionRow kInspection[] = {
    {0.5, 1.0404, 0.0035}, {0.6, 1.0897, 0.0040}, {0.7, 1.1116, 0.0046},
    {0.8, 1.0892, 0.0052}, {0.9, 1.0182, 0.0056},
};

// Least squares Monte Carlo values per truncation level.
struct LsmcRow {
    std::size_t m_bar;
    double value;
    double mc_error;
};
inline constexpr LsmcRow kLsmc[] = {
    {0, 1.1916, 0.0044}, {1, 1.2180, 0.0031}, {2, 1.2252, 0.0030},
    {3, 1.2277, 0.0030}, {5, 1.2296, 0.0030},
};

// Corridor-width sweep for the convergence study.
inline constexpr double kEpsCurve[] = {0.01, 0.02, 0.05, 0.1, 0.2};

}  // namespace occflow::reference
