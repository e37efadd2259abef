#pragma once

#include <cstddef>
#include <functional>

namespace gpx {

struct Minimum {
    double x;
    double value;
};

struct MinimizeOptions {
    std::size_t grid_points = 4096;
    double x_tol = 1e-10;
    // Grid values within this relative band of the grid minimum count as ties;
    // the smallest tied argument wins.
    double tie_rel_tol = 1e-12;
};

/// Golden-section search for a minimum of f on [lo, hi].
Minimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double x_tol);

/// Global minimum of f over [lo, hi] (0 < lo < hi): log-spaced scan, golden-section
/// refinement in the bracketing cell, then a finite-difference Newton polish of the
/// stationary point. Ties on the scan resolve to the smallest argument; an
/// endpoint is returned when the minimum sits on the boundary.
Minimum minimize_log_grid(const std::function<double(double)>& f, double lo, double hi,
                          const MinimizeOptions& opts = {});

}  // namespace gpx
