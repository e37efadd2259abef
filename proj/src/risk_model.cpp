#include "gpx/risk_model.hpp"

#include "gpx/errors.hpp"
#include "gpx/special.hpp"

#include <cmath>
#include <numbers>

namespace gpx {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) {
        throw DomainError(msg);
    }
}

double log_sv(const SlowlyVarying& l, double u) {
    return l ? std::log(l(u)) : 0.0;
}

}  // namespace

RiskParams::RiskParams(double alpha_, double theta_, double c_) : alpha(alpha_), theta(theta_), c(c_) {
    require(alpha > 0 && alpha <= 2, "RiskParams: alpha must lie in (0, 2]");
    require(theta > alpha / 2, "RiskParams: theta must exceed alpha/2");
    require(c > 0, "RiskParams: c must be positive");
}

double risk_variance_ratio(const RiskParams& params, double t) {
    return std::pow(t, params.alpha / 2) / (1.0 + params.c * std::pow(t, params.theta));
}

RiskConstants risk_constants(const RiskParams& params) {
    const double a = params.alpha;
    const double th = params.theta;
    const double c = params.c;
    const double k = 2 * th - a;
    const double s0 = std::pow(a / (c * k), 1.0 / th);
    const double V0 = k / (2 * th) * std::pow(s0, a / 2);
    const double Q = std::pow(2.0, 0.5 + 1.0 / a) * std::sqrt(std::numbers::pi) *
                     std::pow(c, (2 - a) / (2 * th)) * std::pow(a, (a - 2 - th) / (2 * th)) *
                     std::pow(th, (2 - a) / a) *
                     std::pow(k, (th * a - 4 * th + 2 * a - a * a) / (2 * th * a));
    return {s0, V0, Q};
}

double prop1_log_asymptotic(const RiskParams& params, const TailModel& tail, double u,
                            double pickands) {
    require(u > 0, "prop1_asymptotic: u must be positive");
    require(pickands > 0, "prop1_asymptotic: Pickands constant must be positive");
    validate_tail(tail);
    const double a = params.alpha;
    const double th = params.theta;
    const double k = 2 * th - a;
    const RiskConstants rc = risk_constants(params);
    const double s_u = rc.s0 * std::pow(u, 1.0 / th);
    const double log_psi = log_gaussian_survival(std::pow(u, k / (2 * th)) / rc.V0);
    const double base = std::log(rc.Q) + std::log(pickands) + log_psi;

    if (const auto* rv = std::get_if<RegularlyVarying>(&tail)) {
        const double power = (k * (2 - a) - 2 * rv->lambda * a) / (2 * th * a);
        return base - rv->lambda * std::log(rc.s0) + power * std::log(u) + log_sv(rv->slowly_varying, s_u);
    }
    if (const auto* w = std::get_if<Weibullian>(&tail)) {
        if (!(w->p < k / 3)) {
            throw AdmissibilityError("prop1_asymptotic: Weibullian p must be below (2 theta - alpha)/3");
        }
        const double power = (k * (2 - a) + 2 * w->delta * a) / (2 * th * a);
        return base + log_sv(w->slowly_varying, s_u) + w->delta * std::log(rc.s0) +
               power * std::log(u) - w->L * std::pow(rc.s0, w->p) * std::pow(u, w->p / th);
    }
    throw DomainError("prop1_asymptotic: needs a regularly varying or Weibullian endpoint tail");
}

double prop1_asymptotic(const RiskParams& params, const TailModel& tail, double u, double pickands) {
    return std::exp(prop1_log_asymptotic(params, tail, u, pickands));
}

double prop2_A0(const RiskParams& params, double L) {
    require(L > 0, "prop2_A0: L must be positive");
    const double a = params.alpha;
    const double th = params.theta;
    const double c = params.c;
    const double k = 2 * th - a;
    const double num = c * (a - th) +
                       std::sqrt(c * c * (th - a) * (th - a) + 2 * a * (c * c * (th - a / 2) + L * k));
    const double den = c * c * k + 2 * L * k;
    return std::pow(num / den, 1.0 / th);
}

double prop2_rate_function(const RiskParams& params, double L, double t) {
    const double g = 1.0 + params.c * std::pow(t, params.theta);
    return g * g / (2 * std::pow(t, params.alpha)) + L * std::pow(t, 2 * params.theta - params.alpha);
}

RegimeResult prop2_lograte(const RiskParams& params, double p, double L) {
    require(p > 0 && L > 0, "prop2_lograte: p and L must be positive");
    const double a = params.alpha;
    const double k = 2 * params.theta - a;
    const double q_main = k / params.theta;
    // Same tolerance as classify_regime so both routes agree on the boundary.
    if (std::abs(k - p) <= 1e-12 * std::max(k, p)) {
        const double a0 = prop2_A0(params, L);
        return {Regime::Critical, q_main, prop2_rate_function(params, L, a0)};
    }
    if (k > p) {
        const double V0 = risk_constants(params).V0;
        return {Regime::SubCritical, q_main, 1.0 / (2 * V0 * V0)};
    }
    const double K = (0.5 * std::pow(2 * p / a, a / (a + p)) + std::pow(a / (2 * p), p / (a + p))) *
                     std::pow(L, a / (a + p));
    return {Regime::SuperCriticalPowerLaw, 2 * p / (a + p), K};
}

RegimeResult prop34_lograte(const RiskParams& params, const EndpointDensityTail& density) {
    if (const auto* rv = std::get_if<RegularlyVaryingDensity>(&density)) {
        require(rv->lambda > 0, "prop34_lograte: lambda must be positive");
        const double V0 = risk_constants(params).V0;
        return {Regime::SubCritical, (2 * params.theta - params.alpha) / params.theta, 1.0 / (2 * V0 * V0)};
    }
    const auto& lp = std::get<LogPowerDensity>(density);
    return prop2_lograte(params, lp.p, lp.L);
}

RegimeResult laplace_motion_rates(double alpha, double c) {
    require(c > 0, "laplace_motion_rates: c must be positive");
    if (!(alpha > 0 && alpha < 2)) {
        throw UnsupportedCase("laplace_motion_rates: the fractional Laplace case split covers alpha in (0, 2)");
    }
    if (alpha < 1) {
        const double K = 2 / ((2 - alpha) * (2 - alpha)) * std::pow(c * (2 - alpha) / alpha, alpha);
        return {Regime::SubCritical, 2 - alpha, K};
    }
    if (alpha > 1) {
        const double K = 0.5 * std::pow(2 / alpha, alpha / (alpha + 1)) + std::pow(alpha / 2, 1 / (alpha + 1));
        return {Regime::SuperCriticalPowerLaw, 2 / (alpha + 1), K};
    }
    const double a0 = 1 / std::sqrt(c * c + 2);
    const double K = (1 + c * a0) * (1 + c * a0) / (2 * a0) + a0;
    return {Regime::Critical, 1.0, K};
}

LocalStructure z_process_local_structure(const RiskParams& params) {
    const double a = params.alpha;
    const double th = params.theta;
    const double c = params.c;
    const double t0 = risk_constants(params).s0;
    LocalStructure ls;
    ls.t0 = t0;
    ls.a = 0.125 * std::pow(c, 2 / th) * std::pow(a, 1 - 2 / th) * std::pow(2 * th - a, 1 + 2 / th);
    ls.beta = 2.0;
    ls.d = 1 / (2 * std::pow(t0, a));
    ls.alpha = a;
    ls.r = a;
    return ls;
}

ReducedProblem reduce_to_random_interval(const RiskParams& params, double p, double L) {
    require(p > 0 && L > 0, "reduce_to_random_interval: p and L must be positive");
    const RiskConstants rc = risk_constants(params);
    const double k = 2 * params.theta - params.alpha;
    ReducedProblem r;
    r.gamma = 2 / k;
    r.tail_L = L * std::pow(rc.V0, r.gamma * p);
    r.t0 = rc.s0;
    r.V0 = rc.V0;
    r.u_power = k / (2 * params.theta);
    const RiskParams pr = params;
    r.profile.sigma = [pr, V0 = rc.V0](double t) { return risk_variance_ratio(pr, t) / V0; };
    r.profile.sigma_hat = [pr, V0 = rc.V0, s0 = rc.s0](double s) {
        return risk_variance_ratio(pr, std::min(s, s0)) / V0;
    };
    r.profile.origin = PowerLawOrigin{1 / rc.V0, params.alpha / 2};
    return r;
}

RegimeResult lograte_via_random_interval(const RiskParams& params, double p, double L,
                                         const A0Options& opts) {
    const ReducedProblem r = reduce_to_random_interval(params, p, L);
    const RegimeResult v = thmlog_rate(r.profile, r.gamma, p, r.tail_L, r.t0, opts);
    return {v.regime, v.u_exponent * r.u_power, v.constant * std::pow(r.V0, -v.u_exponent)};
}

}  // namespace gpx
