#include "gpx/special.hpp"

#include <cmath>
#include <limits>

namespace gpx {

namespace {

constexpr double kLogBranch = 8.0;

// Psi(x)/phi(x) = 1/(x+1/(x+2/(x+3/(x+...)))), evaluated backwards.
// 120 levels is well past convergence for x >= 8.
double mills_ratio(double x) {
    double t = x;
    for (int k = 120; k >= 1; --k) {
        t = x + k / t;
    }
    return 1.0 / t;
}

}  // namespace

double gaussian_survival(double x) {
    if (std::isnan(x)) {
        return x;
    }
    if (x > kLogBranch) {
        return std::exp(log_gaussian_survival(x));
    }
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double log_gaussian_survival(double x) {
    if (std::isnan(x)) {
        return x;
    }
    if (x == std::numeric_limits<double>::infinity()) {
        return -std::numeric_limits<double>::infinity();
    }
    if (x > kLogBranch) {
        return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio(x));
    }
    if (x < -kLogBranch) {
        return std::log1p(-0.5 * std::erfc(-x / std::sqrt(2.0)));
    }
    return std::log(0.5 * std::erfc(x / std::sqrt(2.0)));
}

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) {
        return b;
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return a;
    }
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace gpx
