#pragma once

namespace gpx {

/// Survival function of the standard normal, P(N(0,1) > x).
/// Beyond x = 8 the value is exp(log_gaussian_survival(x)), so it underflows
/// to zero gracefully instead of through erfc.
double gaussian_survival(double x);

/// log P(N(0,1) > x), accurate for all finite x. Uses a Mills-ratio continued
/// fraction for x > 8 and log1p for x < -8.
double log_gaussian_survival(double x);

/// log(exp(a) + exp(b)) without overflow; -inf operands are allowed.
double log_add_exp(double a, double b);

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

}  // namespace gpx
