#pragma once

#include "gpx/quadrature.hpp"
#include "gpx/risk_model.hpp"
#include "gpx/subordinators.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gpx {

enum class Estimator {
    PlainMC,
    // Averages the exact Brownian conditional ruin probability given Y(T);
    // requires alpha = theta = 1.
    ConditionalMC,
    // Deterministic quadrature of the same conditional probability against the
    // endpoint density; requires alpha = theta = 1.
    QuadratureBM,
};

std::string estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);

struct ExperimentConfig {
    RiskParams risk{1.0, 1.0, 1.0};
    SubordinatorSpec subordinator = DeterministicTime{1.0};
    double T = 1.0;
    std::vector<double> u_list;
    std::size_t n = 10000;
    std::size_t grid_n = 1024;
    std::uint64_t seed = 0;
    Estimator estimator = Estimator::PlainMC;
    double confidence = 0.95;
    unsigned workers = 0;

    void validate() const;
};

struct MCEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    std::size_t grid_n = 0;
    std::size_t successes = 0;  // indicator count for PlainMC
    double log_p_hat = 0.0;     // finite below double underflow for QuadratureBM
};

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double confidence);

/// P(sup_{[0,s]} (B(t) - c t) > u) for standard Brownian motion B.
double bm_drift_sup_prob(double c, double s, double u);
double log_bm_drift_sup_prob(double c, double s, double u);

/// log P(sup_{s <= Y(T)} (B(s) - c s) > u) for alpha = theta = 1, with the law of
/// Y(T) given by `density`: the ruin problem with the supremum taken over the
/// whole range [0, Y(T)]. For a time change with jumps this is an upper bound
/// of the probability over attained values only.
double quadrature_ruin_bm(const RiskParams& risk, const EndpointDensity& density, double u,
                          const LogQuadratureOptions& opts = {});

/// sup over grid times of B(Y(t_i)) - c Y(t_i)^theta, one value per replicate.
/// Time changes with continuous paths use fBm on a uniform grid of [0, Y(T)];
/// jump time changes evaluate B exactly on the attained values Y(t_i).
std::vector<double> ruin_suprema(const ExperimentConfig& config);

MCEstimate mc_ruin(const ExperimentConfig& config, double u);

/// One estimate per entry of config.u_list; MC estimators share random
/// numbers across u, so p_hat is non-increasing in u.
std::vector<MCEstimate> mc_ruin_curve(const ExperimentConfig& config);

/// P(sup_{t in [0, T / u^gamma]} Z(t) > u) with T drawn from the endpoint law of
/// `interval` and Z(t) = B(t) / ((1 + c t^theta) V0).
struct RandomIntervalConfig {
    RiskParams risk{1.0, 1.0, 1.0};
    SubordinatorSpec interval = DeterministicTime{1.0};
    double T = 1.0;
    double gamma = 0.0;
    std::size_t n = 10000;
    std::size_t grid_n = 1024;
    std::uint64_t seed = 0;
    double confidence = 0.95;
    unsigned workers = 0;
};

MCEstimate mc_sup_random_interval(const RandomIntervalConfig& config, double u);
std::vector<MCEstimate> mc_sup_random_interval_curve(const RandomIntervalConfig& config,
                                                     std::span<const double> u_list);

}  // namespace gpx
