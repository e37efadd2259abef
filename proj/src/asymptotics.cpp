#include "gpx/asymptotics.hpp"

#include "gpx/errors.hpp"
#include "gpx/optimize.hpp"
#include "gpx/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpx {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) {
        throw DomainError(msg);
    }
}

void check_alpha_beta(double alpha, double beta) {
    require(alpha > 0 && alpha <= 2, "alpha must lie in (0, 2]");
    require(beta > 0, "beta must be positive");
}

double log_slowly_varying(const SlowlyVarying& l, double u) {
    if (!l) {
        return 0.0;
    }
    const double v = l(u);
    return v > 0 ? std::log(v) : kNegInf;
}

}  // namespace

void LocalStructure::validate() const {
    require(t0 > 0, "LocalStructure: t0 must be positive");
    require(a > 0, "LocalStructure: a must be positive");
    require(beta > 0, "LocalStructure: beta must be positive");
    require(d > 0, "LocalStructure: d must be positive");
    require(alpha > 0 && alpha <= 2, "LocalStructure: alpha must lie in (0, 2]");
    require(r > 0 && r <= 2, "LocalStructure: r must lie in (0, 2]");
}

SlowlyVarying constant_slowly_varying(double value) {
    return [value](double) { return value; };
}

SlowlyVarying log_power_slowly_varying(double k) {
    return [k](double u) { return u > std::exp(1.0) ? std::pow(std::log(u), k) : 1.0; };
}

void validate_tail(const TailModel& tail) {
    std::visit(
        [](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, RegularlyVarying>) {
                require(t.lambda > 0, "RegularlyVarying: lambda must be positive");
            } else {
                require(t.p > 0, "tail: p must be positive");
                require(t.L > 0, "tail: L must be positive");
            }
        },
        tail);
}

std::string tail_name(const TailModel& tail) {
    switch (tail.index()) {
        case 0:
            return "RegularlyVarying";
        case 1:
            return "Weibullian";
        default:
            return "LogPower";
    }
}

double log_tail_probability(const TailModel& tail, double u) {
    require(u > 0, "tail_probability: u must be positive");
    const double v = std::visit(
        [u](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, RegularlyVarying>) {
                return log_slowly_varying(t.slowly_varying, u) - t.lambda * std::log(u);
            } else if constexpr (std::is_same_v<T, Weibullian>) {
                return log_slowly_varying(t.slowly_varying, u) + t.delta * std::log(u) -
                       t.L * std::pow(u, t.p);
            } else {
                return -t.L * std::pow(u, t.p);
            }
        },
        tail);
    return std::min(v, 0.0);
}

double tail_probability(const TailModel& tail, double u) {
    return std::exp(log_tail_probability(tail, u));
}

double AsymptoticExpression::evaluate(double u) const {
    require(u > 0, "AsymptoticExpression: u must be positive");
    const double psi = gaussian_survival(gauss_scale * std::pow(u, gauss_exponent));
    double value = prefactor * std::pow(u, poly_exponent) * psi * constant_factor;
    if (extra_tail) {
        value *= tail_probability(extra_tail->tail, extra_tail->scale * std::pow(u, extra_tail->exponent));
    }
    if (value == 0.0 || !std::isfinite(value)) {
        return std::exp(log_evaluate(u));
    }
    return value;
}

double AsymptoticExpression::log_evaluate(double u) const {
    require(u > 0, "AsymptoticExpression: u must be positive");
    double v = std::log(prefactor) + poly_exponent * std::log(u) +
               log_gaussian_survival(gauss_scale * std::pow(u, gauss_exponent)) +
               std::log(constant_factor);
    if (extra_tail) {
        v += log_tail_probability(extra_tail->tail,
                                  extra_tail->scale * std::pow(u, extra_tail->exponent));
    }
    return v;
}

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::SubCritical:
            return "SubCritical";
        case Regime::Critical:
            return "Critical";
        case Regime::SuperCriticalPositiveSigma0:
            return "SuperCriticalPositiveSigma0";
        case Regime::SuperCriticalPowerLaw:
            return "SuperCriticalPowerLaw";
    }
    return "Unknown";
}

double SigmaProfile::running_max(double s) const {
    if (sigma_hat) {
        return sigma_hat(s);
    }
    require(static_cast<bool>(sigma), "SigmaProfile: sigma is not set");
    constexpr int kPoints = 2048;
    double best = sigma(s);
    for (int i = 0; i < kPoints; ++i) {
        best = std::max(best, sigma(s * i / kPoints));
    }
    return best;
}

double theta_factor(double alpha, double beta, double u) {
    check_alpha_beta(alpha, beta);
    require(u > 0, "theta_factor: u must be positive");
    if (alpha < beta) {
        return std::pow(u, 2.0 / alpha - 2.0 / beta);
    }
    return 1.0;
}

double prefactor_C(double alpha, double beta, double a, double d, double pickands,
                   double piterbarg) {
    check_alpha_beta(alpha, beta);
    if (alpha < beta) {
        require(a > 0 && d > 0, "prefactor_C: a and d must be positive");
        require(pickands > 0, "prefactor_C: Pickands constant must be positive");
        return 2.0 * pickands * std::tgamma(1.0 / beta + 1.0) * std::pow(d, 1.0 / alpha) *
               std::pow(a, -1.0 / beta);
    }
    if (alpha == beta) {
        require(piterbarg > 0, "prefactor_C: Piterbarg constant must be positive");
        return piterbarg;
    }
    return 1.0;
}

AsymptoticExpression k1_asymptotic(const LocalStructure& ls, double pickands, double piterbarg) {
    ls.validate();
    AsymptoticExpression e;
    e.prefactor = prefactor_C(ls.alpha, ls.beta, ls.a, ls.d, pickands, piterbarg);
    e.poly_exponent = ls.alpha < ls.beta ? 2.0 / ls.alpha - 2.0 / ls.beta : 0.0;
    e.gauss_scale = 1.0;
    e.gauss_exponent = 1.0;
    return e;
}

bool weibull_admissible(double p, double gamma, double beta) {
    return p < 2.0 / (gamma * (1.0 + beta));
}

AsymptoticExpression thmT_asymptotic(const LocalStructure& ls, const TailModel& tail,
                                     double gamma, double pickands, double piterbarg) {
    ls.validate();
    validate_tail(tail);
    require(gamma >= 0, "thmT_asymptotic: gamma must be non-negative");
    if (gamma == 0.0) {
        return thmT_asymptotic_fixed(ls, tail_probability(tail, ls.t0), pickands, piterbarg);
    }
    if (!std::holds_alternative<RegularlyVarying>(tail)) {
        const double p = std::holds_alternative<Weibullian>(tail) ? std::get<Weibullian>(tail).p
                                                                   : std::get<LogPower>(tail).p;
        if (!weibull_admissible(p, gamma, ls.beta)) {
            throw AdmissibilityError("thmT_asymptotic: tail exponent p must be below 2/(gamma(1+beta))");
        }
    }
    AsymptoticExpression e = k1_asymptotic(ls, pickands, piterbarg);
    e.extra_tail = TailFactor{tail, ls.t0, gamma};
    return e;
}

AsymptoticExpression thmT_asymptotic_fixed(const LocalStructure& ls, double prob_T_ge_t0,
                                           double pickands, double piterbarg) {
    require(prob_T_ge_t0 > 0 && prob_T_ge_t0 <= 1, "thmT_asymptotic: need 0 < P(T >= t0) <= 1");
    AsymptoticExpression e = k1_asymptotic(ls, pickands, piterbarg);
    e.constant_factor = prob_T_ge_t0;
    return e;
}

double sigma_tilde(const SigmaProfile& profile, double L, double gamma, double s) {
    require(s > 0, "sigma_tilde: s must be positive");
    require(gamma > 0, "sigma_tilde: gamma must be positive");
    const double sh = profile.running_max(s);
    require(sh > 0, "sigma_tilde: running maximum of sigma vanishes at s");
    return 1.0 / (2.0 * sh * sh) + L * std::pow(s, 2.0 / gamma);
}

double solve_A0(const SigmaProfile& profile, double L, double gamma, double t0,
                const A0Options& opts) {
    require(t0 > 0, "solve_A0: t0 must be positive");
    require(L > 0, "solve_A0: L must be positive");
    const double lo = std::min(opts.floor * 1e-2, t0 * 1e-10);
    auto f = [&](double s) {
        const double sh = profile.running_max(s);
        if (!(sh > 0)) {
            return std::numeric_limits<double>::infinity();
        }
        return 1.0 / (2.0 * sh * sh) + L * std::pow(s, 2.0 / gamma);
    };
    MinimizeOptions mo;
    mo.grid_points = opts.grid_points;
    mo.x_tol = 1e-10 * std::min(1.0, t0);
    const Minimum m = minimize_log_grid(f, lo, t0, mo);
    if (m.x < opts.floor) {
        throw DegenerateA0("solve_A0: minimizer collapses to the origin (A0 = 0)");
    }
    return m.x;
}

Regime classify_regime(double gamma, double p, const SigmaProfile& profile) {
    require(gamma > 0 && p > 0, "classify_regime: gamma and p must be positive");
    const double gp = gamma * p;
    if (std::abs(gp - 2.0) <= 2.0 * 1e-12) {
        return Regime::Critical;
    }
    if (gp < 2.0) {
        return Regime::SubCritical;
    }
    if (!profile.origin) {
        throw MissingOriginBehavior(
            "thmlog_rate: gamma*p > 2 needs sigma(0) > 0 or a power-law origin D t^eta");
    }
    return std::holds_alternative<PositiveOrigin>(*profile.origin) ? Regime::SuperCriticalPositiveSigma0
                                                                   : Regime::SuperCriticalPowerLaw;
}

RegimeResult thmlog_rate(const SigmaProfile& profile, double gamma, double tail_p, double tail_L,
                         double t0, const A0Options& opts) {
    require(tail_L > 0, "thmlog_rate: L must be positive");
    const Regime regime = classify_regime(gamma, tail_p, profile);
    switch (regime) {
        case Regime::SubCritical:
            return {regime, 2.0, 0.5};
        case Regime::Critical: {
            const double a0 = solve_A0(profile, tail_L, gamma, t0, opts);
            return {regime, 2.0, sigma_tilde(profile, tail_L, gamma, a0)};
        }
        case Regime::SuperCriticalPositiveSigma0: {
            const double s0 = std::get<PositiveOrigin>(*profile.origin).sigma0;
            require(s0 > 0, "thmlog_rate: sigma0 must be positive");
            return {regime, 2.0, 1.0 / (2.0 * s0 * s0)};
        }
        case Regime::SuperCriticalPowerLaw: {
            const auto& pl = std::get<PowerLawOrigin>(*profile.origin);
            const double q = 2.0 * tail_p * (pl.eta * gamma + 1.0) / (2.0 * pl.eta + tail_p);
            return {regime, q, a1_constant(pl.D, pl.eta, tail_L, tail_p)};
        }
    }
    throw std::logic_error("thmlog_rate: unreachable");
}

double a1_constant(double D, double eta, double L, double p) {
    require(D > 0 && eta > 0 && L > 0 && p > 0, "a1_constant: all arguments must be positive");
    const double s = 2.0 * eta + p;
    return 0.5 * std::pow(D, -2.0 * p / s) * std::pow(L * p / eta, 2.0 * eta / s) +
           std::pow(L, 2.0 * eta / s) * std::pow(eta / (p * D * D), p / s);
}

}  // namespace gpx
