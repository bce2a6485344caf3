#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cdsphere/quadrature.hpp"
#include "cdsphere/rng.hpp"
#include "cdsphere/spectral.hpp"
#include "oracles.hpp"

using namespace cdsphere;

namespace {
// Rayleigh quotient of an axisymmetric trial u in the ell = 0 sector,
// computed by quadrature against the normalized marginal.
double rayleigh_sector0(const MarginalDensity& md, const std::function<double(double)>& u,
                        const std::function<double(double)>& du) {
    const double mean =
        integrate_adaptive([&](double t) { return u(t) * md.pdf(t); }, 0.0, kPi, 1e-11).value;
    const double num =
        integrate_adaptive([&](double t) { return du(t) * du(t) * md.pdf(t); }, 0.0, kPi, 1e-11)
            .value;
    const double den = integrate_adaptive(
                           [&](double t) {
                               const double c = u(t) - mean;
                               return c * c * md.pdf(t);
                           },
                           0.0, kPi, 1e-11)
                           .value;
    return num / den;
}

// Rayleigh quotient for f = u(theta) Y_1 with u = sin(theta) q(cos(theta)).
double rayleigh_sector1(const MarginalDensity& md, int n,
                        const std::function<double(double)>& u,
                        const std::function<double(double)>& du) {
    const double num = integrate_adaptive(
                           [&](double t) {
                               const double sn = std::sin(t);
                               const double pot = (n - 1) / (sn * sn);
                               return (du(t) * du(t) + pot * u(t) * u(t)) * md.pdf(t);
                           },
                           1e-8, kPi - 1e-8, 1e-11)
                           .value;
    const double den =
        integrate_adaptive([&](double t) { return u(t) * u(t) * md.pdf(t); }, 0.0, kPi, 1e-11)
            .value;
    return num / den;
}
}  // namespace

TEST_CASE("tridiagonal Sturm bisection on known matrices") {
    // 2x2: diag {2, 2}, off {-1} has eigenvalues 1 and 3
    const std::vector<double> d2{2.0, 2.0}, e2{-1.0};
    REQUIRE(detail::tridiag_eigenvalue(d2, e2, 0) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(detail::tridiag_eigenvalue(d2, e2, 1) == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(detail::sturm_count(d2, e2, 0.0) == 0);
    REQUIRE(detail::sturm_count(d2, e2, 2.0) == 1);
    REQUIRE(detail::sturm_count(d2, e2, 4.0) == 2);

    // discrete Dirichlet Laplacian: eigenvalues 2 - 2 cos(k pi / (N+1))
    const int N = 100;
    const std::vector<double> d(N, 2.0), e(N - 1, -1.0);
    for (int k : {1, 7, 50, 100}) {
        const double expected = 2.0 - 2.0 * std::cos(k * kPi / (N + 1));
        REQUIRE(detail::tridiag_eigenvalue(d, e, k - 1) == Catch::Approx(expected).margin(1e-11));
    }
}

TEST_CASE("sector problem type carries the potential") {
    const SectorProblem prob{SphereParams{3, 1.0, 0.7}, 2, 512};
    REQUIRE(prob.potential(kPi / 2) == Catch::Approx(2.0 * (2 + 3 - 2)));  // l(l+n-2)/sin^2
    REQUIRE(prob.potential(kPi / 6) == Catch::Approx(6.0 / 0.25).epsilon(1e-12));
    REQUIRE(sector_gap(prob) == Catch::Approx(sector_gap(prob.params, 2, 512)));
}

TEST_CASE("sector gaps on the uniform sphere") {
    // eigenvalues of S^n are l(l+n-1); both sectors see the gap n
    REQUIRE(sector_gap(SphereParams{2, 1.0, 0.0}, 1, 2048) == Catch::Approx(2.0).margin(0.01));
    REQUIRE(sector_gap(SphereParams{2, -2.0, 0.9}, 0, 2048) == Catch::Approx(2.0).margin(0.01));
    REQUIRE(sector_gap(SphereParams{5, -5.0, 0.5}, 1, 1024) == Catch::Approx(5.0).margin(0.02));

    REQUIRE_THROWS_AS(sector_gap(SphereParams{2, 1.0, 0.0}, -1, 512), std::invalid_argument);
    REQUIRE_THROWS_AS(sector_gap(SphereParams{2, 1.0, 0.0}, 1, 32), std::invalid_argument);
}

TEST_CASE("sector gap against the Prüfer shooting oracle") {
    const SphereParams p{3, 1.0, 0.7};
    const double fd = sector_gap(p, 0, 2048);
    const double shooting = oracle::prufer_sector_eigenvalue(p, 0, 1);
    REQUIRE(fd == Catch::Approx(2.6287335).margin(5e-4));
    REQUIRE(shooting == Catch::Approx(fd).margin(5e-4 * fd));

    // oracle sanity on a case with a known answer
    REQUIRE(oracle::prufer_sector_eigenvalue(SphereParams{3, -3.0, 0.0}, 0, 1) ==
            Catch::Approx(3.0).margin(2e-3));
    REQUIRE(oracle::prufer_sector_eigenvalue(SphereParams{2, 1.0, 0.0}, 1, 0) ==
            Catch::Approx(2.0).margin(2e-3));
}

TEST_CASE("spectral gap: uniform measures give n") {
    const auto r1 = spectral_gap(SphereParams{2, 1.0, 0.0});
    REQUIRE(r1.extrapolated == Catch::Approx(2.0).epsilon(0.005));
    REQUIRE(r1.lambda_gap > 0.0);
    REQUIRE(r1.grids_used == std::vector<int>{512, 1024, 2048});
    REQUIRE(r1.error_estimate < 1e-4);

    const auto r2 = spectral_gap(SphereParams{3, -3.0, 0.9});
    REQUIRE(r2.extrapolated == Catch::Approx(3.0).epsilon(0.005));
}

TEST_CASE("spectral gap for the harmonic measure") {
    const auto res = spectral_gap(SphereParams{3, 1.0, 0.7});
    REQUIRE(res.extrapolated >= 1.0);  // (n-1)/2
    REQUIRE(res.extrapolated <= 3.0 * 1.005);
    REQUIRE(res.extrapolated == Catch::Approx(2.6287335).margin(1e-4));
    REQUIRE(res.sector == 0);

    const auto res5 = spectral_gap(SphereParams{5, 1.0, 0.95});
    REQUIRE(res5.extrapolated >= 0.375 * 4.0 - 0.25);  // 3(n-1)/8 - 1/4
}

TEST_CASE("grid convergence is second order") {
    for (const SphereParams p : {SphereParams{2, 1.0, 0.0}, SphereParams{3, 1.0, 0.7}}) {
        for (int ell : {0, 1}) {
            const double l512 = sector_gap(p, ell, 512);
            const double l1024 = sector_gap(p, ell, 1024);
            const double l2048 = sector_gap(p, ell, 2048);
            REQUIRE(std::abs(l2048 - l1024) <= 4.0 * std::abs(l1024 - l512) + 1e-10);
        }
    }
}

TEST_CASE("sector monotonicity in ell") {
    for (const SphereParams p : {SphereParams{2, 1.0, 0.5}, SphereParams{10, 1.0, 0.95},
                                 SphereParams{3, 5.0, 0.8}}) {
        const double l1 = sector_gap(p, 1, 1024);
        const double l2 = sector_gap(p, 2, 1024);
        REQUIRE(l2 >= l1 - 1e-6);
        REQUIRE_NOTHROW(spectral_gap(p, /*audit=*/true));
    }
}

TEST_CASE("Poincaré inequality on random smooth trial functions") {
    const SphereParams p{3, 1.0, 0.6};
    const MarginalDensity md(p);
    const double lambda = spectral_gap(p).extrapolated;
    RngStream rng(505, 0);
    for (int trial = 0; trial < 10; ++trial) {
        double a[4];
        for (double& c : a) c = rng.uniform(-1.0, 1.0);
        const auto u = [&](double t) {
            return a[0] * std::cos(t) + a[1] * std::cos(2 * t) + a[2] * std::cos(3 * t) +
                   a[3] * std::cos(4 * t);
        };
        const auto du = [&](double t) {
            return -a[0] * std::sin(t) - 2 * a[1] * std::sin(2 * t) - 3 * a[2] * std::sin(3 * t) -
                   4 * a[3] * std::sin(4 * t);
        };
        REQUIRE(rayleigh_sector0(md, u, du) >= lambda - 1e-6);
    }
    for (int trial = 0; trial < 10; ++trial) {
        double b[3];
        for (double& c : b) c = rng.uniform(-1.0, 1.0);
        const auto u = [&](double t) {
            const double c = std::cos(t);
            return std::sin(t) * (b[0] + b[1] * c + b[2] * c * c);
        };
        const auto du = [&](double t) {
            const double c = std::cos(t), s = std::sin(t);
            return c * (b[0] + b[1] * c + b[2] * c * c) + s * (-b[1] * s - 2 * b[2] * s * c);
        };
        REQUIRE(rayleigh_sector1(md, p.n, u, du) >= lambda - 1e-6);
    }
}

TEST_CASE("verify_bounds") {
    SECTION("Lichnerowicz-type bound, alpha in (0, 3n-4)") {
        const auto report = verify_bounds(SphereParams{3, 1.0, 0.5});
        REQUIRE(report.all_ok);
        bool found = false;
        for (const auto& c : report.checks)
            if (c.name == "lichnerowicz_negative_dim") {
                found = true;
                REQUIRE(c.lower == Catch::Approx(0.5).margin(1e-12));  // (1/2) rho_{3,1}
                REQUIRE(c.ok);
            }
        REQUIRE(found);
    }
    SECTION("Cheeger route, alpha in (-1, 1)") {
        const auto report = verify_bounds(SphereParams{2, 0.5, 0.8});
        REQUIRE(report.all_ok);
        bool found = false;
        for (const auto& c : report.checks)
            if (c.name == "mazya_cheeger") found = c.ok;
        REQUIRE(found);
    }
    SECTION("uniform case with alpha = -n") {
        const auto result = spectral_gap(SphereParams{10, -10.0, 0.5});
        REQUIRE(result.extrapolated == Catch::Approx(10.0).epsilon(0.005));
        const auto report = verify_bounds(SphereParams{10, -10.0, 0.5}, &result);
        REQUIRE(report.all_ok);
    }
    SECTION("harmonic window") {
        const auto report = verify_bounds(SphereParams{3, 1.0, 0.7});
        bool window = false, order = false;
        for (const auto& c : report.checks) {
            if (c.name == "harmonic_window") window = c.ok;
            if (c.name == "harmonic_correct_order") order = c.ok;
        }
        REQUIRE(window);
        REQUIRE(order);
    }
}

TEST_CASE("alpha scan") {
    const auto rows = alpha_scan(3, 0.9, {-3.0, -1.5, 0.0, 1.0, -4.0});
    REQUIRE(rows.size() == 5);
    REQUIRE(rows[0].error.empty());
    REQUIRE(rows[0].lambda == Catch::Approx(3.0).epsilon(0.005));  // alpha = -n
    REQUIRE(rows[0].sector >= 0);
    REQUIRE(rows[3].bmz_low == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(rows[3].bmz_high == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(std::isnan(rows[1].bmz_low));
    REQUIRE_FALSE(rows[4].error.empty());  // alpha < -n is rejected, scan continues
    for (const auto& row : rows)
        if (row.error.empty()) REQUIRE(row.ratio == Catch::Approx(row.lambda / 3.0));
}
