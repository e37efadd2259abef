#include "gpx/errors.hpp"
#include "gpx/risk_model.hpp"
#include "gpx/special.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gpx;

namespace {

struct Sampler {
    std::mt19937_64 gen{777};
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
    RiskParams params() {
        const double alpha = uniform(0.05, 1.95);
        const double theta = uniform(alpha / 2 + 0.05, 3.0);
        const double c = std::exp(uniform(std::log(0.1), std::log(10.0)));
        return RiskParams(alpha, theta, c);
    }
};

double V(const RiskParams& p, double t) {
    return std::pow(t, p.alpha / 2) / (1 + p.c * std::pow(t, p.theta));
}

}  // namespace

TEST_CASE("RiskParams rejects theta <= alpha / 2") {
    CHECK_THROWS_AS(RiskParams(1.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(RiskParams(2.5, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(RiskParams(1.0, 1.0, 0.0), DomainError);
    CHECK_NOTHROW(RiskParams(2.0, 1.01, 1.0));
}

TEST_CASE("risk constants at alpha = theta = c = 1") {
    const RiskConstants rc = risk_constants(RiskParams(1, 1, 1));
    CHECK(rc.s0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rc.V0 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::log(rc.Q) == doctest::Approx(oracle::log_risk_Q(1, 1, 1)).epsilon(1e-12));
    CHECK(rc.Q == doctest::Approx(std::pow(2.0, 1.5) * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("Q agrees with the regrouped exponent arithmetic") {
    Sampler s;
    for (int k = 0; k < 100; ++k) {
        const RiskParams p = s.params();
        CHECK(std::log(risk_constants(p).Q) == doctest::Approx(oracle::log_risk_Q(p.alpha, p.theta, p.c)).epsilon(1e-12));
    }
}

TEST_CASE("V0 = V(s0) and s0 maximizes V on a 1e6-point grid") {
    Sampler s;
    for (int k = 0; k < 100; ++k) {
        const RiskParams p = s.params();
        const RiskConstants rc = risk_constants(p);
        CHECK(std::abs(rc.V0 - V(p, rc.s0)) < 1e-12 * rc.V0);
        CHECK(risk_variance_ratio(p, rc.s0) == doctest::Approx(V(p, rc.s0)).epsilon(1e-14));
        const double grid_max = oracle::grid_max([&](double t) { return V(p, t); }, 0.0, 10 * rc.s0, 1000000);
        CHECK(std::abs(rc.V0 - grid_max) < 1e-10);
        CHECK(rc.V0 >= grid_max - 1e-15);
    }
}

TEST_CASE("prop1 examples") {
    const RiskParams p(1, 1, 1);
    const RiskConstants rc = risk_constants(p);
    const double expected = rc.Q * 1.0 * std::pow(25.0, -1.5) * gaussian_survival(10.0);
    CHECK(prop1_asymptotic(p, RegularlyVarying{2.0}, 25.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(prop1_asymptotic(RiskParams(1, 2, 1), Weibullian{1, 1}, 10.0, 1.0), AdmissibilityError);
    CHECK_THROWS_AS(prop1_asymptotic(p, LogPower{1, 1}, 10.0, 1.0), DomainError);
}

TEST_CASE("prop1 doubling follows the closed-form exponents") {
    Sampler s;
    for (int k = 0; k < 20; ++k) {
        const RiskParams p = s.params();
        const RiskConstants rc = risk_constants(p);
        const double lambda = s.uniform(0.5, 3);
        const double kk = 2 * p.theta - p.alpha;
        const double power = (kk * (2 - p.alpha) - 2 * lambda * p.alpha) / (2 * p.theta * p.alpha);
        const double u = 20.0;
        const double lhs = prop1_log_asymptotic(p, RegularlyVarying{lambda}, 2 * u, 1.3) -
                           prop1_log_asymptotic(p, RegularlyVarying{lambda}, u, 1.3);
        const double rhs = power * std::log(2.0) +
                           log_gaussian_survival(std::pow(2 * u, kk / (2 * p.theta)) / rc.V0) -
                           log_gaussian_survival(std::pow(u, kk / (2 * p.theta)) / rc.V0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("prop2_A0 closed form") {
    CHECK(prop2_A0(RiskParams(1, 1, 1), 1) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(prop2_A0(RiskParams(1, 1, 2), 1) == doctest::Approx(1 / std::sqrt(6.0)).epsilon(1e-14));
}

TEST_CASE("prop2_A0 minimizes the rate function (dense-grid oracle)") {
    Sampler s;
    for (int k = 0; k < 100; ++k) {
        const RiskParams p = s.params();
        const double L = std::exp(s.uniform(std::log(0.1), std::log(10.0)));
        const auto f = [&](double t) {
            return std::pow(1 + p.c * std::pow(t, p.theta), 2) / (2 * std::pow(t, p.alpha)) +
                   L * std::pow(t, 2 * p.theta - p.alpha);
        };
        const double a0 = prop2_A0(p, L);
        const auto df = [&](double t) { return oracle::risk_rate_derivative(p.alpha, p.theta, p.c, L, t); };
        const double ref = oracle::argmin_with_derivative(f, df, 1e-6, 1e6, 40000);
        CHECK(a0 == doctest::Approx(ref).epsilon(1e-7));
        CHECK(prop2_rate_function(p, L, a0) == doctest::Approx(f(a0)).epsilon(1e-14));
    }
}

TEST_CASE("prop2_lograte regimes") {
    const RiskParams p(1, 1, 1);
    auto r = prop2_lograte(p, 0.5, 1);
    CHECK(r.regime == Regime::SubCritical);
    CHECK(r.u_exponent == 1.0);
    CHECK(r.constant == doctest::Approx(2.0).epsilon(1e-14));

    r = prop2_lograte(p, 1, 1);
    CHECK(r.regime == Regime::Critical);
    CHECK(r.u_exponent == 1.0);
    CHECK(r.constant == doctest::Approx(1 + std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r.constant == prop2_rate_function(p, 1, prop2_A0(p, 1)));

    r = prop2_lograte(RiskParams(1.5, 1, 1), 1, 1);
    CHECK(r.regime == Regime::SuperCriticalPowerLaw);
    CHECK(r.u_exponent == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(r.constant == doctest::Approx(0.5 * std::pow(2 / 1.5, 0.6) + std::pow(0.75, 0.4)).epsilon(1e-14));
}

TEST_CASE("prop2 rates agree with the random-interval rate after reduction") {
    Sampler s;
    for (int k = 0; k < 30; ++k) {
        const RiskParams p = s.params();
        const double kk = 2 * p.theta - p.alpha;
        const double L = std::exp(s.uniform(std::log(0.2), std::log(5.0)));
        for (double pp : {0.5 * kk, kk, std::min(1.8 * kk, kk + 2.0)}) {
            const RegimeResult direct = prop2_lograte(p, pp, L);
            const RegimeResult reduced = lograte_via_random_interval(p, pp, L);
            CHECK(direct.u_exponent == doctest::Approx(reduced.u_exponent).epsilon(1e-12));
            CHECK(direct.constant == doctest::Approx(reduced.constant).epsilon(1e-8));
        }
    }
}

TEST_CASE("q is continuous across p = 2 theta - alpha") {
    Sampler s;
    for (int k = 0; k < 20; ++k) {
        const RiskParams p = s.params();
        const double kk = 2 * p.theta - p.alpha;
        const double q_mid = kk / p.theta;
        CHECK(std::abs(prop2_lograte(p, kk - 1e-4, 1).u_exponent - q_mid) < 1e-3);
        CHECK(std::abs(prop2_lograte(p, kk + 1e-4, 1).u_exponent - q_mid) < 1e-3);
    }
}

TEST_CASE("prop34") {
    const RiskParams p(1, 1, 1);
    const auto rv = prop34_lograte(p, RegularlyVaryingDensity{2.0});
    const auto i = prop2_lograte(p, 0.5, 1);
    CHECK(rv.u_exponent == i.u_exponent);
    CHECK(rv.constant == i.constant);
    const auto lp = prop34_lograte(p, LogPowerDensity{0.5, 3.0});
    CHECK(lp.constant == prop2_lograte(p, 0.5, 3.0).constant);
    const auto crit = prop34_lograte(p, LogPowerDensity{1.0, 1.0});
    CHECK(crit.regime == Regime::Critical);
    CHECK(crit.constant == prop2_lograte(p, 1.0, 1.0).constant);
}

TEST_CASE("fractional Laplace motion") {
    auto r = laplace_motion_rates(0.5, 1);
    CHECK(r.u_exponent == 1.5);
    CHECK(r.constant == doctest::Approx(8.0 / 9.0 * std::sqrt(3.0)).epsilon(1e-14));
    r = laplace_motion_rates(1, 1);
    CHECK(r.u_exponent == 1.0);
    CHECK(r.constant == doctest::Approx(1 + std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(laplace_motion_rates(2.0, 1), UnsupportedCase);

    Sampler s;
    for (int k = 0; k < 50; ++k) {
        const double alpha = k == 0 ? 1.0 : s.uniform(0.05, 1.95);
        const double c = std::exp(s.uniform(std::log(0.1), std::log(10.0)));
        const auto a = laplace_motion_rates(alpha, c);
        const auto b = prop2_lograte(RiskParams(alpha, 1, c), 1, 1);
        CHECK(a.regime == b.regime);
        CHECK(a.u_exponent == doctest::Approx(b.u_exponent).epsilon(1e-14));
        CHECK(a.constant == doctest::Approx(b.constant).epsilon(1e-12));
    }
}

TEST_CASE("local structure of the normalized process") {
    const LocalStructure ls = z_process_local_structure(RiskParams(1, 1, 1));
    CHECK(ls.t0 == doctest::Approx(1.0));
    CHECK(ls.a == doctest::Approx(0.125));
    CHECK(ls.beta == 2.0);
    CHECK(ls.d == doctest::Approx(0.5));

    Sampler s;
    for (int k = 0; k < 50; ++k) {
        const RiskParams p = s.params();
        const LocalStructure z = z_process_local_structure(p);
        const double V0 = risk_constants(p).V0;
        const double t0 = z.t0;
        // a = -sigma''(t0) / 2 for sigma = V / V0, by central differences.
        const double h = 1e-4 * t0;
        const double second = (V(p, t0 + h) - 2 * V(p, t0) + V(p, t0 - h)) / (h * h) / V0;
        CHECK(z.a == doctest::Approx(-0.5 * second).epsilon(1e-5));
        // corr(B(t0), B(t0 + h)) = 1 - h^alpha / (2 t0^alpha) + o(h^alpha).
        const double hh = 1e-7 * t0;
        const double s1 = t0;
        const double s2 = t0 + hh;
        const double cov = 0.5 * (std::pow(s1, p.alpha) + std::pow(s2, p.alpha) - std::pow(hh, p.alpha));
        const double corr = cov / std::sqrt(std::pow(s1, p.alpha) * std::pow(s2, p.alpha));
        // The next term is O(h^2), so the relative remainder is O(h^{2 - alpha}).
        const double tol = 1e-3 + 4 * std::pow(hh / t0, 2 - p.alpha);
        CHECK((1 - corr) / std::pow(hh, p.alpha) == doctest::Approx(z.d).epsilon(tol));
    }
}

TEST_CASE("k1 on the normalized process reproduces the u-power of the exact ruin asymptotics") {
    Sampler s;
    for (int k = 0; k < 20; ++k) {
        const RiskParams p = s.params();
        const LocalStructure ls = z_process_local_structure(p);
        const AsymptoticExpression e = k1_asymptotic(ls, 1.0, 1.0);
        const double kk = 2 * p.theta - p.alpha;
        // v = u^{kk / (2 theta)} / V0 turns v^{poly} into a power of u.
        const double u_power = e.poly_exponent * kk / (2 * p.theta);
        CHECK(u_power == doctest::Approx(kk * (2 - p.alpha) / (2 * p.theta * p.alpha)).epsilon(1e-12));
    }
}
