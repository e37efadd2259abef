#pragma once

#include <cstddef>
#include <functional>

namespace gpx {

struct LogQuadratureOptions {
    double rel_tol = 1e-8;
    std::size_t max_refinements = 10000;
    std::size_t scan_points = 8192;
    // Regions where the integrand is this many nats below its peak are dropped.
    double cutoff = 745.0;
};

struct LogQuadratureResult {
    double log_value;
    double rel_error;  // estimated relative error of exp(log_value)
    std::size_t refinements;
    double peak;  // location of the largest integrand contribution
};

/// log of the integral of exp(log_f(s)) over [lower, upper] (upper may be
/// infinite). The integral is taken in the variable log s with adaptive
/// Gauss-Kronrod 7/15 panels, after a scan that locates the peak and trims the
/// negligible flanks. Throws QuadratureError when rel_tol is not met within
/// max_refinements panel splits.
LogQuadratureResult integrate_log(const std::function<double(double)>& log_f, double lower,
                                  double upper, const LogQuadratureOptions& opts = {});

}  // namespace gpx
