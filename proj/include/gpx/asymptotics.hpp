#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace gpx {

/// Local behaviour of a centered Gaussian process around the unique maximum t0
/// of its standard deviation (normalized so that sigma(t0) = 1):
///   sigma(t) = 1 - a|t - t0|^beta + o(.),
///   corr(X(s)/sigma(s), X(t)/sigma(t)) = 1 - d|t - s|^alpha + o(.),
///   E(X(t) - X(s))^2 <= C|t - s|^r.
struct LocalStructure {
    double t0 = 1.0;
    double a = 1.0;
    double beta = 2.0;
    double d = 1.0;
    double alpha = 1.0;
    double r = 1.0;

    void validate() const;
};

using SlowlyVarying = std::function<double(double)>;

/// The constant slowly varying function.
SlowlyVarying constant_slowly_varying(double value = 1.0);
/// u -> (log u)^k for u > e, and 1 below.
SlowlyVarying log_power_slowly_varying(double k);

struct RegularlyVarying {
    double lambda;
    SlowlyVarying slowly_varying = constant_slowly_varying();
};

struct Weibullian {
    double p;
    double L;
    double delta = 0.0;
    SlowlyVarying slowly_varying = constant_slowly_varying();
};

/// Only the log-rate log P(T > u) ~ -L u^p is meaningful; evaluation uses
/// exp(-L u^p) as a representative member of the class.
struct LogPower {
    double p;
    double L;
};

using TailModel = std::variant<RegularlyVarying, Weibullian, LogPower>;

void validate_tail(const TailModel& tail);
std::string tail_name(const TailModel& tail);

/// P(T > u) under the model, clamped to [0, 1].
double tail_probability(const TailModel& tail, double u);
/// log of tail_probability, finite far beyond double underflow.
double log_tail_probability(const TailModel& tail, double u);

/// Tail factor P(T >= scale * u^exponent) attached to an expression.
struct TailFactor {
    TailModel tail;
    double scale = 1.0;
    double exponent = 0.0;
};

/// u -> prefactor * u^poly_exponent * Psi(gauss_scale * u^gauss_exponent)
///        * constant_factor * [tail factor]
struct AsymptoticExpression {
    double prefactor = 1.0;
    double poly_exponent = 0.0;
    double gauss_scale = 1.0;
    double gauss_exponent = 1.0;
    double constant_factor = 1.0;
    std::optional<TailFactor> extra_tail;

    double evaluate(double u) const;
    double log_evaluate(double u) const;
};

enum class Regime { SubCritical, Critical, SuperCriticalPositiveSigma0, SuperCriticalPowerLaw };

std::string regime_name(Regime regime);

/// log P(u) / u^u_exponent -> -constant.
struct RegimeResult {
    Regime regime;
    double u_exponent;
    double constant;
};

struct PositiveOrigin {
    double sigma0;
};

/// sigma(t) = D t^eta (1 + o(1)) as t -> 0.
struct PowerLawOrigin {
    double D;
    double eta;
};

using OriginBehavior = std::variant<PositiveOrigin, PowerLawOrigin>;

struct SigmaProfile {
    std::function<double(double)> sigma;
    // Running maximum sup_{t <= s} sigma(t); approximated on a grid when empty.
    std::function<double(double)> sigma_hat;
    std::optional<OriginBehavior> origin;

    double running_max(double s) const;
};

double theta_factor(double alpha, double beta, double u);

double prefactor_C(double alpha, double beta, double a, double d, double pickands,
                   double piterbarg);

/// Exact asymptotics of the supremum over a fixed interval containing t0:
/// C_{alpha,beta} theta_{alpha,beta}(u) Psi(u).
AsymptoticExpression k1_asymptotic(const LocalStructure& ls, double pickands, double piterbarg);

bool weibull_admissible(double p, double gamma, double beta);

/// Exact asymptotics over the random interval [0, T/u^gamma]. For gamma = 0 the
/// tail factor is the constant P(T >= t0) read from the model.
AsymptoticExpression thmT_asymptotic(const LocalStructure& ls, const TailModel& tail,
                                     double gamma, double pickands, double piterbarg);

/// gamma = 0 variant with P(T >= t0) supplied directly.
AsymptoticExpression thmT_asymptotic_fixed(const LocalStructure& ls, double prob_T_ge_t0,
                                           double pickands, double piterbarg);

double sigma_tilde(const SigmaProfile& profile, double L, double gamma, double s);

struct A0Options {
    double floor = 1e-8;
    std::size_t grid_points = 4096;
};

double solve_A0(const SigmaProfile& profile, double L, double gamma, double t0,
                const A0Options& opts = {});

Regime classify_regime(double gamma, double p, const SigmaProfile& profile);

RegimeResult thmlog_rate(const SigmaProfile& profile, double gamma, double tail_p, double tail_L,
                         double t0, const A0Options& opts = {});

double a1_constant(double D, double eta, double L, double p);

}  // namespace gpx
