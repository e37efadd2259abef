#pragma once

#include "gpx/asymptotics.hpp"

#include <variant>

namespace gpx {

/// Risk process u + c Y(t)^theta - B_alpha(Y(t)) with B_alpha a fractional
/// Brownian motion of variance t^alpha.
struct RiskParams {
    double alpha;
    double theta;
    double c;

    RiskParams(double alpha, double theta, double c);
};

struct RiskConstants {
    double s0;  // maximizer of V(t) = t^{alpha/2} / (1 + c t^theta)
    double V0;  // V(s0)
    double Q;
};

/// V(t) = t^{alpha/2} / (1 + c t^theta).
double risk_variance_ratio(const RiskParams& params, double t);

RiskConstants risk_constants(const RiskParams& params);

/// Exact ruin asymptotics for a continuous time change whose endpoint Y(T) is
/// regularly varying or Weibullian. H_alpha is injected.
double prop1_asymptotic(const RiskParams& params, const TailModel& tail, double u, double pickands);
double prop1_log_asymptotic(const RiskParams& params, const TailModel& tail, double u,
                            double pickands);

/// Closed-form minimizer of f(t) = (1 + c t^theta)^2 / (2 t^alpha) + L t^{2 theta - alpha}.
double prop2_A0(const RiskParams& params, double L);

/// f above, the Critical-regime rate function.
double prop2_rate_function(const RiskParams& params, double L, double t);

/// Logarithmic ruin asymptotics for a log-power endpoint tail exp(-L u^p).
RegimeResult prop2_lograte(const RiskParams& params, double p, double L);

struct RegularlyVaryingDensity {
    double lambda;  // density regularly varying with index lambda + 1
};

struct LogPowerDensity {
    double p;
    double L;
};

using EndpointDensityTail = std::variant<RegularlyVaryingDensity, LogPowerDensity>;

/// Logarithmic ruin asymptotics for a possibly discontinuous time change,
/// stated through the density of Y(T). The monotone-density requirement of the
/// regularly varying case is a precondition and is not checked.
RegimeResult prop34_lograte(const RiskParams& params, const EndpointDensityTail& density);

/// Fractional Laplace motion (Gamma subordinator, theta = 1, p = L = 1).
RegimeResult laplace_motion_rates(double alpha, double c);

/// Local structure of the normalized process Z(t) = B(t) / ((1 + c t^theta) V0).
LocalStructure z_process_local_structure(const RiskParams& params);

/// The ruin problem rewritten as a random-interval supremum of Z:
///   psi_T(u) = P(sup_{[0, Y(T) V0^{-2/(2theta-alpha)} / v^gamma]} Z > v),
///   v = u^{(2theta-alpha)/(2theta)} / V0, gamma = 2/(2theta - alpha).
struct ReducedProblem {
    SigmaProfile profile;  // sigma_Z(t) = V(t)/V0, with power-law origin D = 1/V0, eta = alpha/2
    double gamma;
    double tail_L;  // log-rate coefficient of the rescaled interval length
    double t0;
    double V0;
    double u_power;  // v = u^u_power / V0
};

ReducedProblem reduce_to_random_interval(const RiskParams& params, double p, double L);

/// prop2_lograte recomputed through thmlog_rate on the reduced problem.
RegimeResult lograte_via_random_interval(const RiskParams& params, double p, double L,
                                         const A0Options& opts = {});

}  // namespace gpx
