#pragma once

#include "gpx/asymptotics.hpp"
#include "gpx/mc_engine.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gpx {

/// Asymptotic prediction for the probability at threshold u.
using Predictor = std::function<double(double)>;

struct RatioRow {
    double u;
    double observed;
    double predicted;
    double ratio;    // observed / predicted
    double ci_low;   // confidence bounds of the ratio
    double ci_high;
    std::string estimator;
    std::uint64_t seed;
};

/// Rows sorted by u from estimates aligned with u_list.
std::vector<RatioRow> ratio_rows(std::span<const double> u_list, std::span<const MCEstimate> estimates,
                                 const Predictor& predicted, const std::string& estimator);

std::vector<RatioRow> run_ratio_experiment(const ExperimentConfig& config, const Predictor& predicted);

struct SlopeReport {
    double u_min;
    double u_max;
    double q;
    double fitted_slope;  // least-squares coefficient of log P on u^q
    double intercept;
    double target_slope;  // -K
    double rel_error;     // |fitted_slope + K| / K
    std::size_t points;
    bool trend_only;  // Monte-Carlo input: only sign and ordering are meaningful
    std::string estimator;
};

/// Least squares of log_observed on u^q (with intercept); non-finite
/// observations are skipped. Throws InsufficientPoints below four points.
SlopeReport fit_log_slope(std::span<const double> u, std::span<const double> log_observed,
                          const RegimeResult& regime);

SlopeReport run_logslope_experiment(const ExperimentConfig& config, const RegimeResult& regime);

/// Central difference (log_f(u + delta) - log_f(u - delta)) / (2 delta).
double local_log_slope(const std::function<double(double)>& log_f, double u, double delta);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

enum class ReportFormat { Csv, Json };

ReportFormat parse_format(const std::string& name);

/// Shortest decimal form with 17 significant digits; non-finite values print
/// as nan, inf or -inf.
std::string format_double(double x);

/// CSV header: u,observed,predicted,ratio,ci_low,ci_high,estimator,seed
std::string render_report(const std::vector<RatioRow>& rows, ReportFormat format);
std::string render_slope_report(const SlopeReport& report, ReportFormat format);

}  // namespace gpx
