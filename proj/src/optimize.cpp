#include "gpx/optimize.hpp"

#include "gpx/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace gpx {

Minimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 400 && (b - a) > x_tol; ++it) {
        // <= keeps the left cell on ties, biasing toward the smaller argument.
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
}

namespace {

// Newton steps on a five-point finite-difference derivative. Only accepted while
// the iterate stays inside [lo, hi] and f does not get worse.
Minimum polish(const std::function<double(double)>& f, Minimum best, double lo, double hi) {
    for (int it = 0; it < 8; ++it) {
        const double x = best.x;
        const double h = std::min(1e-3 * std::abs(x), 0.5 * std::min(x - lo, hi - x));
        if (!(h > 1e-8 * std::abs(x))) {
            break;
        }
        const double fm = f(x - h);
        const double fp = f(x + h);
        const double fm2 = f(x - 2 * h);
        const double fp2 = f(x + 2 * h);
        const double d1 = (8 * (fp - fm) - (fp2 - fm2)) / (12 * h);
        const double d2 = (fp - 2 * best.value + fm) / (h * h);
        if (!(d2 > 0) || !std::isfinite(d1)) {
            break;
        }
        const double step = d1 / d2;
        const double xn = x - step;
        if (xn <= lo || xn >= hi) {
            break;
        }
        const double fn = f(xn);
        if (!(fn <= best.value + 4 * std::numeric_limits<double>::epsilon() * std::abs(best.value))) {
            break;
        }
        best = {xn, fn};
        if (std::abs(step) < 1e-14 * std::abs(xn)) {
            break;
        }
    }
    return best;
}

}  // namespace

Minimum minimize_log_grid(const std::function<double(double)>& f, double lo, double hi,
                          const MinimizeOptions& opts) {
    if (!(lo > 0) || !(hi > lo)) {
        throw DomainError("minimize_log_grid: need 0 < lo < hi");
    }
    const std::size_t n = std::max<std::size_t>(opts.grid_points, 3);
    std::vector<double> xs(n);
    std::vector<double> fs(n);
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / static_cast<double>(n - 1);
    double fmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = i + 1 == n ? hi : std::exp(log_lo + step * static_cast<double>(i));
        fs[i] = f(xs[i]);
        if (fs[i] < fmin) {
            fmin = fs[i];
        }
    }
    if (!std::isfinite(fmin)) {
        throw NumericError("minimize_log_grid: objective has no finite value on the grid");
    }
    const double band = opts.tie_rel_tol * std::max(std::abs(fmin), 1.0);
    std::size_t idx = 0;
    while (fs[idx] > fmin + band) {
        ++idx;
    }
    const double a = xs[idx == 0 ? 0 : idx - 1];
    const double b = xs[idx + 1 == n ? n - 1 : idx + 1];
    Minimum best = golden_section(f, a, b, opts.x_tol);
    if (fs[idx] < best.value) {
        best = {xs[idx], fs[idx]};
    }
    best = polish(f, best, a, b);
    // Boundary minimizers: golden converges toward the end of the bracket but
    // never evaluates it.
    if (idx + 1 == n && fs[n - 1] <= best.value) {
        best = {xs[n - 1], fs[n - 1]};
    }
    if (idx == 0 && fs[0] <= best.value) {
        best = {xs[0], fs[0]};
    }
    return best;
}

}  // namespace gpx
