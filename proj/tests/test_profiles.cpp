#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cdsphere/profiles.hpp"
#include "oracles.hpp"

using namespace cdsphere;

namespace {
// frozen by the quadrature oracles (cross-checked at 40 digits)
constexpr double kCnorm_2_1 = 0.17677669529663688;        // sqrt(0.125)/2
constexpr double kPhi_5_05_t1 = 0.19368453621930511;
constexpr double kPhiCdf_2_1_t1 = 0.6697615493266569;
constexpr double kIsop_3_1_v025 = 0.26516504294495532;
constexpr double kCheeger_2_1 = 0.35355339059327376;      // sqrt(0.125)
constexpr double kCheeger_10_m0999 = 0.08209996883206452;
constexpr double kTail_2_1_r1 = 0.33023845067334307;
constexpr double kPdf_3_2_06_t1 = 0.45364312524350722;    // marginal pdf oracle value

// independent normalization integral: int_0^inf cosh(t)^(-m) dt computed by
// long-double Simpson after the substitution v = exp(-2kt) is undone; here a
// direct finite-interval form via z = tanh-like substitution:
// I(m) = (2/m) int_0^1 (2 - z^(2/m))^(m/2 - 1) dz.
double half_integral_oracle(double m) {
    const auto f = [m](long double z) {
        return std::pow(2.0L - std::pow(z, 2.0L / static_cast<long double>(m)),
                        0.5L * static_cast<long double>(m) - 1.0L);
    };
    return static_cast<double>((2.0L / m) * oracle::simpson_ld(f, 0.0L, 1.0L, 1e-17L));
}
}  // namespace

TEST_CASE("profile admissibility") {
    REQUIRE_NOTHROW(ModelProfile(SphereParams{2, 1.0, 0.0}));
    REQUIRE_THROWS_AS(ModelProfile(SphereParams{2, -1.0, 0.0}), std::domain_error);
    REQUIRE_THROWS_AS(ModelProfile(SphereParams{2, 2.0, 0.0}), std::domain_error);  // 3n-4
    REQUIRE_THROWS_AS(ModelProfile(SphereParams{5, 10.0, 1.0 - 1e-12}), std::invalid_argument);
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    REQUIRE(p21.rho() == Catch::Approx(0.25).margin(1e-15));
    REQUIRE(p21.delta() == Catch::Approx(0.125).margin(1e-15));
}

TEST_CASE("model density phi") {
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    REQUIRE(p21.phi(0.0) == Catch::Approx(kCnorm_2_1).epsilon(1e-13));
    REQUIRE(p21.c_norm() == Catch::Approx(std::sqrt(0.125) / 2.0).epsilon(1e-13));

    SECTION("evenness") {
        for (double t : {0.3, 1.7, 8.0, 44.0})
            REQUIRE(p21.phi(t) == Catch::Approx(p21.phi(-t)).epsilon(1e-15));
    }

    SECTION("frozen value and quadrature normalization oracle") {
        const ModelProfile p55(SphereParams{5, 0.5, 0.0});
        REQUIRE(p55.phi(1.0) == Catch::Approx(kPhi_5_05_t1).epsilon(1e-12));
        // independent check of the normalizing constant
        const double I = half_integral_oracle(0.5 + 1.0);
        const double c_oracle = std::sqrt(p55.delta()) / (2.0 * I);
        REQUIRE(p55.c_norm() == Catch::Approx(c_oracle).epsilon(1e-10));
    }

    SECTION("no overflow far out") {
        REQUIRE(p21.phi(5000.0) >= 0.0);
        REQUIRE(std::isfinite(p21.log_phi(5000.0)));
    }
}

TEST_CASE("phi integrates to one (independent quadrature incl. tail)") {
    for (const SphereParams p : {SphereParams{2, 1.0, 0.0}, SphereParams{10, -0.5, 0.0},
                                 SphereParams{3, 4.0, 0.0}}) {
        const ModelProfile prof(p);
        const double m = p.alpha + 1.0, k = std::sqrt(prof.delta());
        const double T = prof.horizon();
        const auto phi_ld = [&](long double t) {
            return static_cast<long double>(prof.phi(static_cast<double>(t)));
        };
        const double body = static_cast<double>(
            oracle::simpson_ld(phi_ld, 0.0L, static_cast<long double>(T), 1e-17L));
        // tail by the substitution z = exp(-m k t): int_T^inf phi =
        // (c 2^m / (m k)) int_0^{e^{-mkT}} (1 + z^(2/m))^(-m) dz
        const auto tail_f = [m](long double z) {
            return std::pow(1.0L + std::pow(z, 2.0L / static_cast<long double>(m)),
                            -static_cast<long double>(m));
        };
        const double zmax = std::exp(-m * k * T);
        const double tail = prof.c_norm() * std::pow(2.0, m) / (m * k) *
                            static_cast<double>(oracle::simpson_ld(
                                tail_f, 0.0L, static_cast<long double>(zmax), 1e-20L));
        REQUIRE(std::abs(2.0 * (body + tail) - 1.0) <= 1e-10);
    }
}

TEST_CASE("CDF Phi and its inverse") {
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    REQUIRE(p21.Phi(0.0) == 0.5);
    REQUIRE(p21.Phi_inv(0.5) == 0.0);
    REQUIRE(p21.Phi(1.0) == Catch::Approx(kPhiCdf_2_1_t1).margin(1e-12));
    REQUIRE_THROWS_AS(p21.Phi_inv(0.0), std::domain_error);
    REQUIRE_THROWS_AS(p21.Phi_inv(1.0), std::domain_error);

    SECTION("Phi_inv o Phi = id on [-5, 5]") {
        for (const SphereParams params : {SphereParams{2, 1.0, 0.0}, SphereParams{3, 0.5, 0.0}}) {
            const ModelProfile prof(params);
            for (int i = 0; i <= 40; ++i) {
                const double t = -5.0 + 10.0 * i / 40.0;
                REQUIRE(prof.Phi_inv(prof.Phi(t)) == Catch::Approx(t).margin(1e-8));
            }
        }
    }

    SECTION("monotone increasing onto (0,1)") {
        double prev = 0.0;
        for (int i = -30; i <= 30; ++i) {
            const double c = p21.Phi(i * 0.5);
            REQUIRE(c > prev);
            REQUIRE(c < 1.0);
            prev = c;
        }
    }
}

TEST_CASE("isoperimetric lower bound") {
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    REQUIRE(p21.isop_lower(0.5) == Catch::Approx(p21.c_norm()).epsilon(1e-12));
    for (double v : {0.05, 0.2, 0.35})
        REQUIRE(p21.isop_lower(v) == Catch::Approx(p21.isop_lower(1.0 - v)).epsilon(1e-10));

    const ModelProfile p31(SphereParams{3, 1.0, 0.0});
    REQUIRE(p31.Phi_inv(0.25) == Catch::Approx(-0.7768361992120932).margin(1e-9));
    REQUIRE(p31.isop_lower(0.25) == Catch::Approx(kIsop_3_1_v025).margin(1e-10));
}

TEST_CASE("Cheeger-type constant") {
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    REQUIRE(p21.cheeger_lower() == Catch::Approx(kCheeger_2_1).epsilon(1e-13));

    const ModelProfile pn(SphereParams{10, -0.999, 0.0});
    REQUIRE(pn.cheeger_lower() == Catch::Approx(kCheeger_10_m0999).epsilon(1e-9));
    const double I = half_integral_oracle(1.0 - 0.999);
    REQUIRE(pn.cheeger_lower() == Catch::Approx(std::sqrt(pn.delta()) / I).epsilon(1e-8));
    REQUIRE(pn.cheeger_lower() > 0.0);

    SECTION("consistency with the profile infimum") {
        // inf_v isop_lower(v) / min(v, 1-v) is attained at v = 1/2 and equals
        // the Cheeger constant of the model
        double inf_ratio = std::numeric_limits<double>::infinity();
        for (int i = 1; i < 2000; ++i) {
            const double v = i / 2000.0;
            inf_ratio = std::min(inf_ratio, p21.isop_lower(v) / std::min(v, 1.0 - v));
        }
        REQUIRE(inf_ratio == Catch::Approx(p21.cheeger_lower()).margin(1e-6));
    }
}

TEST_CASE("model tail bound") {
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    REQUIRE(p21.tail_bound(0.0) == 0.5);
    REQUIRE(p21.tail_bound(1.0) == Catch::Approx(kTail_2_1_r1).margin(1e-12));
    REQUIRE_THROWS_AS(p21.tail_bound(-0.1), std::domain_error);

    SECTION("strictly decreasing") {
        double prev = 1.0;
        for (int i = 0; i <= 60; ++i) {
            const double t = p21.tail_bound(i * 0.5);
            REQUIRE(t < prev);
            prev = t;
        }
    }

    SECTION("exponential decay at rate (alpha+1) sqrt(delta)") {
        // e^{rate r} tail(r) increases to the asymptotic envelope, so the
        // tail is dominated by (c 2^m / rate) e^{-rate r} and bounded below
        // by tail(r0) e^{-rate (r - r0)}.
        for (const SphereParams params : {SphereParams{2, 1.0, 0.0}, SphereParams{5, 3.0, 0.0}}) {
            const ModelProfile prof(params);
            const double m = params.alpha + 1.0;
            const double rate = m * std::sqrt(prof.delta());
            const double envelope = prof.c_norm() * std::pow(2.0, m) / rate;
            const double r0 = 1.0 / std::sqrt(prof.delta());
            double prev_scaled = 0.0;
            for (int i = 0; i <= 20; ++i) {
                const double r = r0 + i * 0.25;
                const double scaled = std::exp(rate * r) * prof.tail_bound(r);
                REQUIRE(scaled >= prev_scaled - 1e-10);
                REQUIRE(prof.tail_bound(r) <= envelope * std::exp(-rate * r) + 1e-10);
                REQUIRE(prof.tail_bound(r) >=
                        prof.tail_bound(r0) * std::exp(-rate * (r - r0)) - 1e-12);
                prev_scaled = scaled;
            }
        }
    }
}

TEST_CASE("two-level overlay with user-supplied constants") {
    const ModelProfile p21(SphereParams{2, 1.0, 0.0});
    const double rho = p21.rho(), m = 2.0;
    const double crossover = std::sqrt(m / rho);
    // Gaussian regime below the crossover, exponential beyond
    const double r1 = 0.5 * crossover;
    REQUIRE(p21.two_level_overlay(r1, 0.5, 2.0) ==
            Catch::Approx(2.0 * std::exp(-0.5 * rho * r1 * r1) / (1.0 + std::sqrt(rho) * r1)));
    const double r2 = 2.0 * crossover;
    REQUIRE(p21.two_level_overlay(r2, 0.5, 2.0) ==
            Catch::Approx(2.0 / std::sqrt(m) * std::exp(-0.5 * std::sqrt(m * rho) * r2)));
    REQUIRE_THROWS_AS(p21.two_level_overlay(-1.0, 0.5, 2.0), std::domain_error);
}

TEST_CASE("cap boundary measure") {
    MarginalDensity uniform(SphereParams{2, 1.0, 0.0});
    REQUIRE(cap_boundary_measure(uniform, kPi / 2) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(cap_boundary_measure(uniform, 1.1) == uniform.pdf(1.1));
    REQUIRE_THROWS_AS(cap_boundary_measure(uniform, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(cap_boundary_measure(uniform, kPi), std::domain_error);

    MarginalDensity md(SphereParams{3, 2.0, 0.6});
    REQUIRE(cap_boundary_measure(md, 1.0) == Catch::Approx(kPdf_3_2_06_t1).margin(1e-10));
}

TEST_CASE("cap isoperimetry holds") {
    for (const SphereParams p : {SphereParams{2, 1.0, 0.5}, SphereParams{2, -0.5, 0.9},
                                 SphereParams{5, 8.0, 0.7}}) {
        const auto report = isop_check_caps(p, 200);
        INFO("worst slack " << report.worst_slack << " at theta0 " << report.worst_theta0);
        REQUIRE(report.ok);
        REQUIRE(report.worst_slack >= -1e-8);
        REQUIRE(report.rows.size() == 200);
        // rows form a coherent CSV: v increasing, slack consistent
        for (std::size_t i = 1; i < report.rows.size(); ++i)
            REQUIRE(report.rows[i].v >= report.rows[i - 1].v);
        for (const auto& row : report.rows)
            REQUIRE(row.slack ==
                    Catch::Approx(row.boundary_measure - row.lower_bound).margin(1e-15));
    }
    REQUIRE_THROWS_AS(isop_check_caps(SphereParams{5, 10.0, 1.0 - 1e-12}, 50),
                      std::invalid_argument);
}
