#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cdsphere/measures.hpp"
#include "cdsphere/quadrature.hpp"

using namespace cdsphere;

TEST_CASE("adaptive GK15 on smooth integrands") {
    const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12);
    REQUIRE(r.converged);
    REQUIRE(r.value == Catch::Approx(2.0).epsilon(1e-13));

    const auto r2 = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    REQUIRE(r2.value == Catch::Approx(1.0 / 3.0).epsilon(1e-14));

    REQUIRE(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0, 1e-12).value == 0.0);
}

TEST_CASE("adaptive GK15 resolves a sharp interior peak") {
    // int_-1^1 dx / (x^2 + a^2) = 2 atan(1/a) / a
    const double a = 1e-3;
    const auto r = integrate_adaptive([a](double x) { return 1.0 / (x * x + a * a); }, -1.0, 1.0,
                                      1e-9);
    REQUIRE(r.converged);
    REQUIRE(r.value == Catch::Approx(2.0 * std::atan(1.0 / a) / a).epsilon(1e-11));
}

TEST_CASE("non-convergence is reported with the achieved error") {
    const auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x) + 1e-300); };
    const auto r = integrate_adaptive(f, -1.0, 1.0, 1e-14, /*max_panels=*/8);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.error > 1e-14);
    REQUIRE_THROWS_AS(integrate_or_throw(f, -1.0, 1.0, 1e-300), QuadratureError);
    try {
        integrate_or_throw(f, -1.0, 1.0, 1e-300);
    } catch (const QuadratureError& e) {
        REQUIRE(e.achieved_error() > 0.0);
    }
}
