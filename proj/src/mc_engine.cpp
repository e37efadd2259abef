#include "gpx/mc_engine.hpp"

#include "gpx/errors.hpp"
#include "gpx/fbm.hpp"
#include "gpx/parallel.hpp"
#include "gpx/rng.hpp"
#include "gpx/special.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpx {

namespace {

// Key offset for the time-change streams, so they never coincide with the
// Gaussian streams of the same seed.
constexpr std::uint64_t kTimeChangeKey = 0xD1B54A32D192ED03ULL;

double normal_quantile_two_sided(double confidence) {
    if (!(confidence > 0 && confidence < 1)) {
        throw DomainError("confidence must lie in (0, 1)");
    }
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
}

bool brownian_case(const RiskParams& risk) {
    return risk.alpha == 1.0 && risk.theta == 1.0;
}

MCEstimate binomial_estimate(std::size_t successes, std::size_t n, double confidence,
                             std::uint64_t seed, std::size_t grid_n) {
    MCEstimate e;
    e.n = n;
    e.successes = successes;
    e.p_hat = static_cast<double>(successes) / static_cast<double>(n);
    e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
    std::tie(e.ci_low, e.ci_high) = wilson_interval(successes, n, confidence);
    e.seed = seed;
    e.grid_n = grid_n;
    e.log_p_hat = std::log(e.p_hat);
    return e;
}

// Fills values with the standardized fBm on [0, 1] for replicates 2k and 2k+1
// of `seed` and calls use(replicate, path) for each replicate below n.
template <class Use>
void for_each_standard_path(const FbmSampler& sampler, std::size_t n, std::uint64_t seed,
                            unsigned workers, Use&& use) {
    const std::size_t m = sampler.grid().n;
    const std::size_t pairs = (n + 1) / 2;
    parallel_for(pairs, workers, [&](std::size_t begin, std::size_t end, unsigned) {
        auto ws = sampler.make_workspace();
        std::vector<double> a(m + 1);
        std::vector<double> b(m + 1);
        for (std::size_t k = begin; k < end; ++k) {
            sampler.sample_pair(seed, k, a, b, ws);
            use(2 * k, std::span<const double>(a));
            if (2 * k + 1 < n) {
                use(2 * k + 1, std::span<const double>(b));
            }
        }
    });
}

// B_alpha at the non-decreasing times y (y[0] = 0) by exact Gaussian
// factorization over the distinct positive times. Returns false when there are
// too many distinct times for the dense factorization or when it loses
// positive definiteness beyond a relative 1e-8.
bool fbm_at_times(double alpha, std::span<const double> y, RandomStream& rs, std::vector<double>& out) {
    constexpr std::size_t kMaxDense = 4096;
    out.assign(y.size(), 0.0);
    if (alpha == 1.0) {
        for (std::size_t i = 1; i < y.size(); ++i) {
            out[i] = out[i - 1] + std::sqrt(std::max(y[i] - y[i - 1], 0.0)) * rs.normal();
        }
        return true;
    }
    // Times closer than `merge` share one value of B; the discarded increment
    // has standard deviation below 1e-7 Y(T)^{alpha/2}. Without this the
    // near-zero early values of a Gamma path make the matrix singular.
    const double merge = std::pow(1e-7, 2 / alpha) * y.back();
    std::vector<double> times;
    std::vector<std::size_t> index(y.size(), 0);
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double last = times.empty() ? 0.0 : times.back();
        if (y[i] - last > merge) {
            times.push_back(y[i]);
        }
        index[i] = times.size();  // 0 means time zero
    }
    const std::size_t k = times.size();
    if (k > kMaxDense) {
        return false;
    }
    // Cholesky of the covariance of the increments B(t_i) - B(t_{i-1}), whose
    // diagonal |t_i - t_{i-1}|^alpha is exact; extended precision because
    // clustered jump times make the matrix nearly singular.
    using real = long double;
    const auto pw = [alpha](real x) { return std::pow(std::abs(x), static_cast<real>(alpha)); };
    std::vector<real> chol(k * k, 0.0L);
    for (std::size_t j = 0; j < k; ++j) {
        const real tj = times[j];
        const real tj0 = j > 0 ? times[j - 1] : 0.0L;
        for (std::size_t i = j; i < k; ++i) {
            const real ti = times[i];
            const real ti0 = i > 0 ? times[i - 1] : 0.0L;
            real v = i == j ? pw(ti - ti0) : 0.5L * (pw(ti - tj0) + pw(ti0 - tj) - pw(ti - tj) - pw(ti0 - tj0));
            for (std::size_t l = 0; l < j; ++l) {
                v -= chol[i * k + l] * chol[j * k + l];
            }
            if (i == j) {
                // Entries carry rounding of order eps * t^alpha, which dominates
                // the pivot when two jump times nearly coincide.
                if (v < -1e-8L * pw(ti - ti0) - 1e-14L * pw(ti)) {
                    return false;
                }
                chol[j * k + j] = std::sqrt(std::max(v, 0.0L));
            } else {
                const real d = chol[j * k + j];
                chol[i * k + j] = d > 0 ? v / d : 0.0L;
            }
        }
    }
    std::vector<real> z(k);
    for (auto& v : z) {
        v = rs.normal();
    }
    std::vector<double> values(k + 1, 0.0);
    real level = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
        real v = 0.0L;
        for (std::size_t l = 0; l <= i; ++l) {
            v += chol[i * k + l] * z[l];
        }
        level += v;
        values[i + 1] = static_cast<double>(level);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = values[index[i]];
    }
    return true;
}

void validate_u(double u) {
    if (!std::isfinite(u)) {
        throw DomainError("threshold u must be finite");
    }
}

}  // namespace

std::string estimator_name(Estimator e) {
    switch (e) {
        case Estimator::PlainMC:
            return "PlainMC";
        case Estimator::ConditionalMC:
            return "ConditionalMC";
        case Estimator::QuadratureBM:
            return "QuadratureBM";
    }
    return "unknown";
}

Estimator parse_estimator(const std::string& name) {
    for (Estimator e : {Estimator::PlainMC, Estimator::ConditionalMC, Estimator::QuadratureBM}) {
        if (estimator_name(e) == name) {
            return e;
        }
    }
    throw DomainError("unknown estimator '" + name + "'");
}

void ExperimentConfig::validate() const {
    validate_subordinator(subordinator);
    if (!(T > 0)) {
        throw DomainError("ExperimentConfig: T must be positive");
    }
    if (n < 1 || grid_n < 2) {
        throw DomainError("ExperimentConfig: need n >= 1 and grid_n >= 2");
    }
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        if (!(u_list[i] > 0) || (i > 0 && !(u_list[i] > u_list[i - 1]))) {
            throw DomainError("ExperimentConfig: u_list must be positive and strictly ascending");
        }
    }
    if (estimator != Estimator::PlainMC && !brownian_case(risk)) {
        throw UnsupportedCase(estimator_name(estimator) + " requires alpha = 1 and theta = 1");
    }
    normal_quantile_two_sided(confidence);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double confidence) {
    if (n < 1 || successes > n) {
        throw DomainError("wilson_interval: need 0 <= successes <= n and n >= 1");
    }
    const double z = normal_quantile_two_sided(confidence);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double high = successes == n ? 1.0 : std::min(1.0, centre + half);
    return {low, high};
}

double log_bm_drift_sup_prob(double c, double s, double u) {
    if (!(s > 0) || !(c >= 0) || !(u >= 0)) {
        throw DomainError("bm_drift_sup_prob: need s > 0, c >= 0, u >= 0");
    }
    if (u == 0) {
        return 0.0;
    }
    const double rs = std::sqrt(s);
    return log_add_exp(log_gaussian_survival((u + c * s) / rs),
                       -2 * c * u + log_gaussian_survival((u - c * s) / rs));
}

double bm_drift_sup_prob(double c, double s, double u) {
    return std::min(1.0, std::exp(log_bm_drift_sup_prob(c, s, u)));
}

double quadrature_ruin_bm(const RiskParams& risk, const EndpointDensity& density, double u,
                          const LogQuadratureOptions& opts) {
    if (!brownian_case(risk)) {
        throw UnsupportedCase("quadrature_ruin_bm: requires alpha = 1 and theta = 1");
    }
    if (!(u > 0)) {
        throw DomainError("quadrature_ruin_bm: u must be positive");
    }
    if (density.atom) {
        return log_bm_drift_sup_prob(risk.c, *density.atom, u);
    }
    if (!density.log_density) {
        throw UnsupportedSpec("quadrature_ruin_bm: density handle is empty");
    }
    const double c = risk.c;
    auto log_integrand = [&](double s) {
        if (!(s > 0)) {
            return -std::numeric_limits<double>::infinity();
        }
        const double ld = density.log_density(s);
        if (!(ld > -std::numeric_limits<double>::infinity())) {
            return -std::numeric_limits<double>::infinity();
        }
        return log_bm_drift_sup_prob(c, s, u) + ld;
    };
    return integrate_log(log_integrand, density.lower, density.upper, opts).log_value;
}

std::vector<double> ruin_suprema(const ExperimentConfig& config) {
    config.validate();
    const RiskParams& risk = config.risk;
    const std::size_t n = config.n;
    const std::size_t m = config.grid_n;
    const unsigned workers = resolve_workers(config.workers);
    std::vector<double> sups(n);
    const bool reduced = has_continuous_paths(config.subordinator) ||
                         std::holds_alternative<EndpointOnly>(config.subordinator);
    const FbmSampler standard(risk.alpha, GridSpec{m, 1.0});
    std::vector<double> unit_pow(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        unit_pow[i] = std::pow(static_cast<double>(i) / static_cast<double>(m), risk.theta);
    }

    // sup over the uniform grid of [0, y] using a standardized path.
    auto reduced_sup = [&](double y, std::span<const double> path) {
        const double scale = std::pow(y, risk.alpha / 2);
        const double drift = risk.c * std::pow(y, risk.theta);
        double best = 0.0;
        for (std::size_t i = 1; i <= m; ++i) {
            best = std::max(best, scale * path[i] - drift * unit_pow[i]);
        }
        return best;
    };

    if (reduced) {
        for_each_standard_path(standard, n, config.seed, workers,
                               [&](std::size_t r, std::span<const double> path) {
                                   RandomStream ys(config.seed + kTimeChangeKey, r);
                                   const double y = sample_endpoint(config.subordinator, config.T, ys);
                                   sups[r] = y > 0 ? reduced_sup(y, path) : 0.0;
                               });
        return sups;
    }

    const GridSpec grid{m, config.T};
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end, unsigned) {
        std::vector<double> b;
        std::vector<double> fallback(m + 1);
        auto ws = standard.make_workspace();
        for (std::size_t r = begin; r < end; ++r) {
            RandomStream ys(config.seed + kTimeChangeKey, r);
            const std::vector<double> y = sample_path(config.subordinator, grid, ys);
            RandomStream gs(config.seed, r);
            if (!fbm_at_times(risk.alpha, y, gs, b)) {
                standard.sample_replicate(config.seed, r, fallback, ws);
                sups[r] = y.back() > 0 ? reduced_sup(y.back(), fallback) : 0.0;
                continue;
            }
            double best = 0.0;
            for (std::size_t i = 1; i <= m; ++i) {
                best = std::max(best, b[i] - risk.c * std::pow(y[i], risk.theta));
            }
            sups[r] = best;
        }
    });
    return sups;
}

std::vector<MCEstimate> mc_ruin_curve(const ExperimentConfig& config) {
    config.validate();
    std::vector<MCEstimate> out;
    if (config.estimator == Estimator::PlainMC) {
        const std::vector<double> sups = ruin_suprema(config);
        for (double u : config.u_list) {
            const auto hits = static_cast<std::size_t>(
                std::count_if(sups.begin(), sups.end(), [u](double s) { return s > u; }));
            out.push_back(binomial_estimate(hits, config.n, config.confidence, config.seed, config.grid_n));
        }
        return out;
    }
    if (config.estimator == Estimator::QuadratureBM) {
        const EndpointDensity density = endpoint_density(config.subordinator, config.T);
        for (double u : config.u_list) {
            MCEstimate e;
            e.log_p_hat = quadrature_ruin_bm(config.risk, density, u);
            e.p_hat = std::exp(e.log_p_hat);
            e.ci_low = e.p_hat;
            e.ci_high = e.p_hat;
            e.seed = config.seed;
            e.grid_n = 0;
            out.push_back(e);
        }
        return out;
    }
    // ConditionalMC: average of the exact conditional probability given Y(T).
    std::vector<double> endpoints(config.n);
    parallel_for(config.n, resolve_workers(config.workers), [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t r = begin; r < end; ++r) {
            RandomStream ys(config.seed + kTimeChangeKey, r);
            endpoints[r] = sample_endpoint(config.subordinator, config.T, ys);
        }
    });
    const double z = normal_quantile_two_sided(config.confidence);
    const double nn = static_cast<double>(config.n);
    for (double u : config.u_list) {
        std::vector<double> values(config.n);
        std::vector<double> logs(config.n);
        for (std::size_t r = 0; r < config.n; ++r) {
            logs[r] = endpoints[r] > 0 ? log_bm_drift_sup_prob(config.risk.c, endpoints[r], u)
                                       : -std::numeric_limits<double>::infinity();
            values[r] = std::exp(logs[r]);
        }
        MCEstimate e;
        e.n = config.n;
        e.p_hat = pairwise_sum(values) / nn;
        for (double& v : values) {
            v = (v - e.p_hat) * (v - e.p_hat);
        }
        const double var = config.n > 1 ? pairwise_sum(values) / (nn - 1) : 0.0;
        e.std_error = std::sqrt(var / nn);
        e.ci_low = std::max(0.0, e.p_hat - z * e.std_error);
        e.ci_high = std::min(1.0, e.p_hat + z * e.std_error);
        double lse = -std::numeric_limits<double>::infinity();
        for (double l : logs) {
            lse = log_add_exp(lse, l);
        }
        e.log_p_hat = lse - std::log(nn);
        e.seed = config.seed;
        e.grid_n = 0;
        out.push_back(e);
    }
    return out;
}

MCEstimate mc_ruin(const ExperimentConfig& config, double u) {
    validate_u(u);
    ExperimentConfig single = config;
    single.u_list.clear();
    single.validate();
    if (config.estimator == Estimator::PlainMC) {
        const std::vector<double> sups = ruin_suprema(single);
        const auto hits = static_cast<std::size_t>(
            std::count_if(sups.begin(), sups.end(), [u](double s) { return s > u; }));
        return binomial_estimate(hits, config.n, config.confidence, config.seed, config.grid_n);
    }
    single.u_list = {u};
    return mc_ruin_curve(single).front();
}

std::vector<MCEstimate> mc_sup_random_interval_curve(const RandomIntervalConfig& config,
                                                     std::span<const double> u_list) {
    validate_subordinator(config.interval);
    if (!(config.T > 0) || !(config.gamma >= 0) || config.n < 1 || config.grid_n < 2) {
        throw DomainError("mc_sup_random_interval: need T > 0, gamma >= 0, n >= 1, grid_n >= 2");
    }
    for (double u : u_list) {
        if (!(u > 0) || !std::isfinite(u)) {
            throw DomainError("mc_sup_random_interval: u must be positive");
        }
    }
    const RiskParams& risk = config.risk;
    const double V0 = risk_constants(risk).V0;
    const std::size_t m = config.grid_n;
    const std::size_t nu = u_list.size();
    const FbmSampler standard(risk.alpha, GridSpec{m, 1.0});
    std::vector<double> unit_pow(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        unit_pow[i] = std::pow(static_cast<double>(i) / static_cast<double>(m), risk.theta);
    }
    std::vector<unsigned char> hits(config.n * nu, 0);
    for_each_standard_path(standard, config.n, config.seed, resolve_workers(config.workers),
                           [&](std::size_t r, std::span<const double> path) {
                               RandomStream ts(config.seed + kTimeChangeKey, r);
                               const double length = sample_endpoint(config.interval, config.T, ts);
                               for (std::size_t j = 0; j < nu; ++j) {
                                   const double h = length / std::pow(u_list[j], config.gamma);
                                   if (!(h > 0)) {
                                       continue;
                                   }
                                   const double scale = std::pow(h, risk.alpha / 2) / V0;
                                   const double hth = risk.c * std::pow(h, risk.theta);
                                   double best = 0.0;
                                   for (std::size_t i = 1; i <= m; ++i) {
                                       best = std::max(best, scale * path[i] / (1.0 + hth * unit_pow[i]));
                                   }
                                   hits[r * nu + j] = best > u_list[j] ? 1 : 0;
                               }
                           });
    std::vector<MCEstimate> out;
    for (std::size_t j = 0; j < nu; ++j) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < config.n; ++r) {
            count += hits[r * nu + j];
        }
        out.push_back(binomial_estimate(count, config.n, config.confidence, config.seed, m));
    }
    return out;
}

MCEstimate mc_sup_random_interval(const RandomIntervalConfig& config, double u) {
    const double us[1] = {u};
    return mc_sup_random_interval_curve(config, us).front();
}

}  // namespace gpx
