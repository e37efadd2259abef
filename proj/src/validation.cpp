#include "gpx/validation.hpp"

#include "gpx/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gpx {

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

std::vector<RatioRow> ratio_rows(std::span<const double> u_list, std::span<const MCEstimate> estimates,
                                 const Predictor& predicted, const std::string& estimator) {
    if (u_list.size() != estimates.size()) {
        throw DomainError("ratio_rows: u_list and estimates differ in length");
    }
    std::vector<RatioRow> rows;
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        const double pred = predicted(u_list[i]);
        if (!(pred > 0)) {
            throw DomainError("ratio_rows: predicted value must be positive");
        }
        const MCEstimate& e = estimates[i];
        rows.push_back({u_list[i], e.p_hat, pred, e.p_hat / pred, e.ci_low / pred, e.ci_high / pred,
                        estimator, e.seed});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const RatioRow& a, const RatioRow& b) { return a.u < b.u; });
    return rows;
}

std::vector<RatioRow> run_ratio_experiment(const ExperimentConfig& config, const Predictor& predicted) {
    const std::vector<MCEstimate> estimates = mc_ruin_curve(config);
    return ratio_rows(config.u_list, estimates, predicted, estimator_name(config.estimator));
}

SlopeReport fit_log_slope(std::span<const double> u, std::span<const double> log_observed,
                          const RegimeResult& regime) {
    if (u.size() != log_observed.size()) {
        throw DomainError("fit_log_slope: inputs differ in length");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::isfinite(log_observed[i])) {
            xs.push_back(std::pow(u[i], regime.u_exponent));
            ys.push_back(log_observed[i]);
        }
    }
    if (xs.size() < 4) {
        throw InsufficientPoints("fit_log_slope: need at least 4 finite observations");
    }
    const double nn = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / nn;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / nn;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0)) {
        throw InsufficientPoints("fit_log_slope: thresholds must not all coincide");
    }
    SlopeReport r{};
    r.u_min = *std::min_element(u.begin(), u.end());
    r.u_max = *std::max_element(u.begin(), u.end());
    r.q = regime.u_exponent;
    r.fitted_slope = sxy / sxx;
    r.intercept = my - r.fitted_slope * mx;
    r.target_slope = -regime.constant;
    r.rel_error = std::abs(r.fitted_slope + regime.constant) / regime.constant;
    r.points = xs.size();
    r.trend_only = false;
    return r;
}

SlopeReport run_logslope_experiment(const ExperimentConfig& config, const RegimeResult& regime) {
    const std::vector<MCEstimate> estimates = mc_ruin_curve(config);
    std::vector<double> logs;
    for (const MCEstimate& e : estimates) {
        logs.push_back(e.log_p_hat);
    }
    SlopeReport r = fit_log_slope(config.u_list, logs, regime);
    r.trend_only = config.estimator != Estimator::QuadratureBM;
    r.estimator = estimator_name(config.estimator);
    return r;
}

double local_log_slope(const std::function<double(double)>& log_f, double u, double delta) {
    if (!(delta > 0)) {
        throw DomainError("local_log_slope: delta must be positive");
    }
    return (log_f(u + delta) - log_f(u - delta)) / (2 * delta);
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("spearman_correlation: need two aligned samples of size >= 2");
    }
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double nn = static_cast<double>(x.size());
    const double mean = (nn + 1) / 2;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0 || syy == 0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") {
        return ReportFormat::Csv;
    }
    if (name == "json") {
        return ReportFormat::Json;
    }
    throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string render_report(const std::vector<RatioRow>& rows, ReportFormat format) {
    if (rows.empty()) {
        throw DomainError("render_report: no rows");
    }
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "u,observed,predicted,ratio,ci_low,ci_high,estimator,seed\n";
        for (const RatioRow& r : rows) {
            out << format_double(r.u) << ',' << format_double(r.observed) << ','
                << format_double(r.predicted) << ',' << format_double(r.ratio) << ','
                << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ',' << r.estimator
                << ',' << r.seed << '\n';
        }
        return out.str();
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const RatioRow& r : rows) {
        doc.push_back({{"u", r.u},
                       {"observed", r.observed},
                       {"predicted", r.predicted},
                       {"ratio", r.ratio},
                       {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},
                       {"estimator", r.estimator},
                       {"seed", r.seed}});
    }
    return doc.dump(2) + "\n";
}

std::string render_slope_report(const SlopeReport& r, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "u_min,u_max,q,fitted_slope,intercept,target_slope,rel_error,points,trend_only,estimator\n"
            << format_double(r.u_min) << ',' << format_double(r.u_max) << ',' << format_double(r.q) << ','
            << format_double(r.fitted_slope) << ',' << format_double(r.intercept) << ','
            << format_double(r.target_slope) << ',' << format_double(r.rel_error) << ',' << r.points << ','
            << (r.trend_only ? "true" : "false") << ',' << r.estimator << '\n';
        return out.str();
    }
    const nlohmann::ordered_json doc = {{"u_min", r.u_min},
                                        {"u_max", r.u_max},
                                        {"q", r.q},
                                        {"fitted_slope", r.fitted_slope},
                                        {"intercept", r.intercept},
                                        {"target_slope", r.target_slope},
                                        {"rel_error", r.rel_error},
                                        {"points", r.points},
                                        {"trend_only", r.trend_only},
                                        {"estimator", r.estimator}};
    return doc.dump(2) + "\n";
}

}  // namespace gpx
