#include "gpx/optimize.hpp"

#include <doctest.h>

#include <cmath>

using namespace gpx;

TEST_CASE("golden section on a parabola") {
    const auto m = golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(m.x - 0.3) < 1e-9);
}

TEST_CASE("log-grid minimizer finds interior and boundary minima") {
    const auto interior = minimize_log_grid([](double x) { return 1 / (2 * x) + x; }, 1e-6, 10.0);
    CHECK(std::abs(interior.x - 1 / std::sqrt(2.0)) < 1e-10);
    CHECK(interior.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    const auto boundary = minimize_log_grid([](double x) { return 1 / x; }, 1e-3, 5.0);
    CHECK(boundary.x == doctest::Approx(5.0));
    const auto left = minimize_log_grid([](double x) { return x; }, 1e-3, 5.0);
    CHECK(left.x == doctest::Approx(1e-3));
}

TEST_CASE("ties resolve to the smallest argument") {
    // Flat on [1, 2], rising elsewhere.
    const auto f = [](double x) { return x < 1 ? 1 - x : (x > 2 ? x - 2 : 0.0); };
    const auto m = minimize_log_grid(f, 1e-2, 10.0);
    CHECK(m.value == doctest::Approx(0.0));
    CHECK(m.x <= 1.0 + 1e-2);
}

TEST_CASE("multimodal function: the global minimum wins") {
    const auto f = [](double x) { return std::sin(10 * std::log(x)) + 0.01 * std::log(x) * std::log(x); };
    const auto m = minimize_log_grid(f, 1e-3, 1e3);
    for (double x = 1e-3; x <= 1e3; x *= 1.001) {
        CHECK(m.value <= f(x) + 1e-9);
    }
}
