#pragma once

// Reference computations used as independent oracles by the tests. Nothing
// here calls into the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) {
        ++n;
    }
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 ? 4 : 2);
    }
    return s * h / 3;
}

/// P(N > x) by integrating the standard normal density.
inline double normal_tail(double x) {
    const auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi); };
    return simpson(phi, x, x + 40.0, 200000);
}

/// Minimum of f over [lo, hi]: dense log-spaced grid followed by ternary
/// search in the best cell.
struct GridMin {
    double x;
    double value;
};

inline GridMin dense_min(const std::function<double(double)>& f, double lo, double hi, int n = 200000) {
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    int best = 0;
    double best_v = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = f(std::exp(llo + (lhi - llo) * i / n));
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    double a = std::exp(llo + (lhi - llo) * std::max(best - 1, 0) / n);
    double b = std::exp(llo + (lhi - llo) * std::min(best + 1, n) / n);
    for (int it = 0; it < 200; ++it) {
        const double m1 = a + (b - a) / 3;
        const double m2 = b - (b - a) / 3;
        if (f(m1) <= f(m2)) {
            b = m2;
        } else {
            a = m1;
        }
    }
    const double x = 0.5 * (a + b);
    const double v = f(x);
    if (v < best_v) {
        return {x, v};
    }
    return {std::exp(llo + (lhi - llo) * best / n), best_v};
}

/// Sign change of df inside [a, b] by bisection (df(a) < 0 < df(b)).
inline double bisect_root(const std::function<double(double)>& df, double a, double b) {
    for (int it = 0; it < 200 && a < b; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) {
            break;
        }
        (df(m) < 0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

/// Argmin of a smooth unimodal f: dense_min brackets the minimum, then the
/// root of its derivative df is bisected (function values are too flat near
/// the minimum to locate it beyond sqrt(eps)).
inline double argmin_with_derivative(const std::function<double(double)>& f,
                                     const std::function<double(double)>& df, double lo, double hi,
                                     int n = 200000) {
    const double x = dense_min(f, lo, hi, n).x;
    double a = x;
    double b = x;
    while (df(a) >= 0) {
        a *= 0.999;
    }
    while (df(b) <= 0) {
        b *= 1.001;
    }
    return bisect_root(df, a, b);
}

/// Derivative of (1 + c t^theta)^2 / (2 t^alpha) + L t^{2 theta - alpha}.
inline double risk_rate_derivative(double alpha, double theta, double c, double L, double t) {
    const double g = 1 + c * std::pow(t, theta);
    const double dg = c * theta * std::pow(t, theta - 1);
    const double k = 2 * theta - alpha;
    return g * dg / std::pow(t, alpha) - 0.5 * alpha * g * g / std::pow(t, alpha + 1) + L * k * std::pow(t, k - 1);
}

/// Maximum of f on a uniform grid of n + 1 points over [lo, hi].
inline double grid_max(const std::function<double(double)>& f, double lo, double hi, int n) {
    double best = -INFINITY;
    for (int i = 0; i <= n; ++i) {
        best = std::max(best, f(lo + (hi - lo) * i / n));
    }
    return best;
}

/// log Q of the risk model, with the exponents regrouped term by term.
inline double log_risk_Q(double alpha, double theta, double c) {
    const double k = 2 * theta - alpha;
    const double e_c = 1 / theta - alpha / (2 * theta);
    const double e_alpha = (alpha - 2) / (2 * theta) - 0.5;
    const double e_theta = 2 / alpha - 1;
    const double e_k = 0.5 - 2 / alpha + 1 / theta - alpha / (2 * theta);
    return (0.5 + 1 / alpha) * std::log(2.0) + 0.5 * std::log(std::numbers::pi) + e_c * std::log(c) +
           e_alpha * std::log(alpha) + e_theta * std::log(theta) + e_k * std::log(k);
}

/// P(sup_{[0,s]} (sigma W(t) - mu t) > x) for standard Brownian W (reflection).
inline double drifted_bm_sup_tail(double sigma, double mu, double s, double x) {
    const double y = x / sigma;
    const double m = mu / sigma;
    const auto Psi = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
    return Psi((y + m * s) / std::sqrt(s)) + std::exp(-2 * m * y) * Psi((y - m * s) / std::sqrt(s));
}

/// S^{-1} E exp(sup_{[0,S]} (sqrt2 B(t) - t)) for Brownian B, from the
/// reflection law of the supremum: E e^M = 1 + int_0^inf e^x P(M > x) dx.
inline double pickands_truncated_bm(double S) {
    const auto integrand = [S](double x) { return std::exp(x) * drifted_bm_sup_tail(std::sqrt(2.0), 1.0, S, x); };
    return (1.0 + simpson(integrand, 0.0, 4 * S + 200.0, 400000)) / S;
}

/// S^{-1} E exp(sup_{[0,S]} (sqrt2 t N - t^2)) for N standard normal:
/// sup = 0 if N <= 0, N^2/2 if N < sqrt2 S, sqrt2 S N - S^2 beyond.
inline double pickands_truncated_line(double S) {
    const auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi); };
    const double edge = std::sqrt(2.0) * S;
    const double inner = simpson([&](double n) { return std::exp(0.5 * n * n) * phi(n); }, 0.0, edge, 200000);
    const double outer = simpson(
        [&](double n) { return std::exp(edge * n - S * S - 0.5 * n * n) / std::sqrt(2 * std::numbers::pi); },
        edge, edge + 60.0, 200000);
    return (0.5 + inner + outer) / S;
}

}  // namespace oracle
