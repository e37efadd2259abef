#include "gpx/asymptotics.hpp"
#include "gpx/errors.hpp"
#include "gpx/special.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gpx;

namespace {

SigmaProfile ramp_profile(double t0) {
    SigmaProfile p;
    p.sigma = [t0](double s) { return std::min(s / t0, 1.0); };
    p.sigma_hat = p.sigma;
    return p;
}

LocalStructure unit_ls() {
    LocalStructure ls;
    ls.t0 = 1;
    ls.a = 1;
    ls.beta = 2;
    ls.d = 1;
    ls.alpha = 1;
    ls.r = 1;
    return ls;
}

}  // namespace

TEST_CASE("theta_factor") {
    CHECK(theta_factor(1, 2, 10) == doctest::Approx(10.0));
    CHECK(theta_factor(2, 1, 7) == 1.0);
    CHECK(theta_factor(1.5, 1.5, 100) == 1.0);
    CHECK_THROWS_AS(theta_factor(0, 1, 1), DomainError);
    CHECK_THROWS_AS(theta_factor(2.5, 1, 1), DomainError);
    CHECK_THROWS_AS(theta_factor(1, 0, 1), DomainError);
}

TEST_CASE("theta_factor is 1 for alpha >= beta and continuous from below") {
    for (double u : {1.5, 10.0, 1e3}) {
        for (double b = 0.2; b <= 2.0; b += 0.2) {
            CHECK(theta_factor(b, b, u) == 1.0);
            CHECK(theta_factor(std::min(2.0, b + 0.1), b, u) == 1.0);
            CHECK(theta_factor(b - 1e-9, b, u) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("prefactor_C") {
    CHECK(prefactor_C(2, 1, 1, 1, 0, 0) == 1.0);
    CHECK(prefactor_C(1, 2, 1, 1, 1.0, 0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(prefactor_C(1, 1, 3, 5, 0, 7.25) == 7.25);
    // Gamma(1/beta + 1) d^{1/alpha} a^{-1/beta} scaling.
    CHECK(prefactor_C(0.5, 1, 2, 3, 1.3, 0) ==
          doctest::Approx(2 * 1.3 * std::tgamma(2.0) * 9.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("k1_asymptotic") {
    const auto e = k1_asymptotic(unit_ls(), 1.0, 0.0);
    CHECK(e.prefactor == doctest::Approx(std::sqrt(M_PI)));
    CHECK(e.poly_exponent == doctest::Approx(1.0));
    CHECK(e.evaluate(3.0) == doctest::Approx(std::sqrt(M_PI) * 3.0 * gaussian_survival(3.0)).epsilon(1e-14));

    LocalStructure ls = unit_ls();
    ls.alpha = 2;
    ls.beta = 1;
    const auto e2 = k1_asymptotic(ls, 0.0, 0.0);
    CHECK(e2.prefactor == 1.0);
    CHECK(e2.poly_exponent == 0.0);
    CHECK(e2.evaluate(2.5) == doctest::Approx(gaussian_survival(2.5)).epsilon(1e-15));

    double prev = e.log_evaluate(5.0);
    for (double u = 6.0; u < 60.0; u += 1.0) {
        CHECK(e.log_evaluate(u) < prev);
        prev = e.log_evaluate(u);
    }
}

TEST_CASE("tail_probability") {
    CHECK(tail_probability(RegularlyVarying{2.0}, 10) == doctest::Approx(0.01));
    CHECK(tail_probability(Weibullian{1, 1}, 3) == doctest::Approx(0.049787).epsilon(1e-5));
    CHECK(tail_probability(LogPower{2, 0.5}, 2) == doctest::Approx(0.13534).epsilon(1e-4));
    CHECK(tail_probability(RegularlyVarying{2.0}, 0.1) == 1.0);
    CHECK(tail_probability(RegularlyVarying{1.0, log_power_slowly_varying(2.0)}, 100.0) ==
          doctest::Approx(std::pow(std::log(100.0), 2) / 100.0));
    CHECK(log_tail_probability(LogPower{2, 1}, 1e3) == doctest::Approx(-1e6));
}

TEST_CASE("thmT_asymptotic") {
    const LocalStructure ls = unit_ls();
    SUBCASE("gamma = 0 with a certain interval reproduces k1 exactly") {
        const auto k1 = k1_asymptotic(ls, 1.0, 0.0);
        const auto t = thmT_asymptotic_fixed(ls, 1.0, 1.0, 0.0);
        for (double u = 0.5; u < 50; u += 0.37) {
            CHECK(t.evaluate(u) == k1.evaluate(u));
        }
    }
    SUBCASE("regularly varying tail attaches P(T >= t0 u^gamma)") {
        const auto t = thmT_asymptotic(ls, RegularlyVarying{2.0}, 1.0, 1.0, 0.0);
        const auto k1 = k1_asymptotic(ls, 1.0, 0.0);
        for (double u : {3.0, 7.0, 20.0}) {
            CHECK(t.evaluate(u) == doctest::Approx(k1.evaluate(u) * std::pow(u, -2.0)).epsilon(1e-13));
        }
    }
    SUBCASE("Weibullian tail outside the admissible range") {
        CHECK_THROWS_AS(thmT_asymptotic(ls, Weibullian{1, 1}, 1.0, 1.0, 0.0), AdmissibilityError);
        CHECK_NOTHROW(thmT_asymptotic(ls, Weibullian{0.5, 1}, 1.0, 1.0, 0.0));
    }
    SUBCASE("gamma = 0 reads P(T >= t0) from the model") {
        const auto t = thmT_asymptotic(ls, Weibullian{1, 1}, 0.0, 1.0, 0.0);
        const auto k1 = k1_asymptotic(ls, 1.0, 0.0);
        CHECK(t.evaluate(4.0) == doctest::Approx(k1.evaluate(4.0) * std::exp(-1.0)).epsilon(1e-14));
    }
}

TEST_CASE("weibull_admissible") {
    CHECK(weibull_admissible(0.1, 1, 1));
    CHECK_FALSE(weibull_admissible(1, 1, 2));
    CHECK(weibull_admissible(0.66, 1, 2));
}

TEST_CASE("sigma_tilde") {
    SigmaProfile flat;
    flat.sigma = [](double) { return 1.0; };
    flat.sigma_hat = flat.sigma;
    CHECK(sigma_tilde(flat, 1, 2, 1) == doctest::Approx(1.5));
    CHECK(sigma_tilde(ramp_profile(1.0), 8, 2, 0.5) == doctest::Approx(6.0));
    CHECK(sigma_tilde(ramp_profile(1.0), 8, 2, 1e-6) > 1e11);
}

TEST_CASE("solve_A0 against the dense-grid oracle") {
    const SigmaProfile ramp = ramp_profile(1.0);
    CHECK(std::abs(solve_A0(ramp, 8, 2, 1) - 0.5) < 1e-9);
    CHECK(std::abs(solve_A0(ramp, 1, 2, 1) - 1.0) < 1e-9);

    SigmaProfile plateau;
    plateau.sigma = [](double s) { return std::min(2 * s, 1.0); };
    plateau.sigma_hat = plateau.sigma;
    for (double L : {0.5, 4.0, 40.0}) {
        const double a0 = solve_A0(plateau, L, 2, 1);
        const auto ref = oracle::dense_min([&](double s) { return sigma_tilde(plateau, L, 2, s); }, 1e-6, 1.0);
        CHECK(std::abs(a0 - ref.x) < 1e-6);
    }

    SigmaProfile flat;
    flat.sigma = [](double) { return 1.0; };
    flat.sigma_hat = flat.sigma;
    CHECK_THROWS_AS(solve_A0(flat, 1, 2, 1), DegenerateA0);
}

TEST_CASE("solve_A0 minimizer dominates a 1e5-point grid") {
    SigmaProfile wavy;
    wavy.sigma = [](double s) {
        return s > 0 ? std::min(1.0, s * (1.2 + 0.2 * std::sin(6 * std::log(s)))) : 0.0;
    };
    for (double L : {0.3, 2.0, 9.0}) {
        const double t0 = 1.5;
        const double a0 = solve_A0(wavy, L, 2, t0);
        const double at = sigma_tilde(wavy, L, 2, a0);
        const double lo = std::log(1e-6 * t0);
        const double hi = std::log(t0);
        for (int i = 0; i < 100000; ++i) {
            const double s = std::exp(lo + (hi - lo) * (i + 1) / 100000.0);
            REQUIRE(at <= sigma_tilde(wavy, L, 2, s) + 1e-9);
        }
    }
}

TEST_CASE("thmlog_rate regimes") {
    const SigmaProfile ramp = ramp_profile(1.0);
    auto r = thmlog_rate(ramp, 1, 1, 1, 1);
    CHECK(r.regime == Regime::SubCritical);
    CHECK(r.u_exponent == 2.0);
    CHECK(r.constant == 0.5);

    r = thmlog_rate(ramp, 2, 1, 8, 1);
    CHECK(r.regime == Regime::Critical);
    CHECK(r.u_exponent == 2.0);
    CHECK(r.constant == doctest::Approx(6.0).epsilon(1e-12));

    SigmaProfile power = ramp;
    power.sigma = [](double s) { return std::min(std::sqrt(s), 1.0); };
    power.sigma_hat = power.sigma;
    power.origin = PowerLawOrigin{1.0, 0.5};
    r = thmlog_rate(power, 3, 1, 1, 1);
    CHECK(r.regime == Regime::SuperCriticalPowerLaw);
    CHECK(r.u_exponent == doctest::Approx(2.5));
    CHECK(r.constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    SigmaProfile positive = ramp;
    positive.origin = PositiveOrigin{0.5};
    r = thmlog_rate(positive, 3, 1, 1, 1);
    CHECK(r.regime == Regime::SuperCriticalPositiveSigma0);
    CHECK(r.constant == doctest::Approx(2.0));

    CHECK_THROWS_AS(thmlog_rate(ramp, 3, 1, 1, 1), MissingOriginBehavior);
}

TEST_CASE("regime selector is total and exclusive on a 100 x 100 grid") {
    SigmaProfile prof = ramp_profile(1.0);
    prof.origin = PositiveOrigin{0.7};
    int counts[4] = {0, 0, 0, 0};
    for (int i = 1; i <= 100; ++i) {
        for (int j = 1; j <= 100; ++j) {
            const double gamma = 0.05 * i;
            const double p = 0.05 * j;
            const RegimeResult r = thmlog_rate(prof, gamma, p, 1.0, 1.0);
            const double gp = gamma * p;
            if (std::abs(gp - 2) <= 2e-12) {
                CHECK(r.regime == Regime::Critical);
            } else if (gp < 2) {
                CHECK(r.regime == Regime::SubCritical);
            } else {
                CHECK(r.regime == Regime::SuperCriticalPositiveSigma0);
            }
            CHECK(r.constant > 0);
            CHECK(r.u_exponent > 0);
            ++counts[static_cast<int>(r.regime)];
        }
    }
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == 10000);
    CHECK(counts[1] > 0);
}

TEST_CASE("a1_constant equals the minimum of 1/(2 D^2 t^{2 eta}) + L t^p") {
    CHECK(a1_constant(1, 0.5, 1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(a1_constant(1, 1, 1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unif(std::log(0.1), std::log(10.0));
    for (int k = 0; k < 100; ++k) {
        const double D = std::exp(unif(gen));
        const double eta = std::exp(unif(gen));
        const double L = std::exp(unif(gen));
        const double p = std::exp(unif(gen));
        const auto g = [&](double t) { return 1 / (2 * D * D * std::pow(t, 2 * eta)) + L * std::pow(t, p); };
        // The minimizer solves eta / (D^2 t^{2 eta + 1}) = L p t^{p - 1}.
        const double t_star = std::pow(eta / (D * D * L * p), 1 / (2 * eta + p));
        const auto ref = oracle::dense_min(g, t_star * 1e-3, t_star * 1e3, 20000);
        CHECK(a1_constant(D, eta, L, p) == doctest::Approx(ref.value).epsilon(1e-8));
    }
}

TEST_CASE("lighter Weibullian tails vanish against heavier ones") {
    const double u = 1e3;
    const double log_ratio = -std::pow(u, 2.0) - log_tail_probability(Weibullian{1.0, 1.0}, u);
    CHECK(log_ratio < std::log(1e-100));
}
