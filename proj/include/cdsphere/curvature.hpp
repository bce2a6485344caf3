// Curvature-dimension certificates for the weighted-sphere family.
//
// The analytic certificate is CD(n-1-(n+alpha)/4, -alpha). The numeric side
// re-derives the curvature bound by minimizing
//
//     F_p(a, b) = (a d + (p-2) b^2) / d^2,   d = (1-a)^2 + b^2,
//
// over the disk a^2 + b^2 <= radius^2, where a = <x, y> and b = <x, theta>
// for a point y on the sphere and a unit tangent theta (d = |y-x|^2 when x
// lies in the span of y and theta, the worst case for the minimum). The
// generalized Ricci quadratic form itself is (n-1) + (n+alpha)(a D - b^2)/D^2
// with D = |y-x|^2, bounded below by the disk minimum of F; the sphere's
// second fundamental form II = g is baked in. An independent
// finite-difference route differentiates the ambient distance-to-x function
// along great circles.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdsphere/errors.hpp"
#include "cdsphere/measures.hpp"
#include "cdsphere/parallel.hpp"
#include "cdsphere/rng.hpp"

namespace cdsphere {

struct CdCertificate {
    SphereParams params;
    double rho_analytic = 0.0;
    double N = 0.0;  // generalized dimension, -alpha
    double rho_numeric = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 2> argmin{std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::quiet_NaN()};
    double search_radius = std::numeric_limits<double>::quiet_NaN();
};

/// Analytic certificate CD(n-1-(n+alpha)/4, -alpha); numeric fields NaN.
inline CdCertificate analytic_cd(const SphereParams& p) {
    p.validate_cd();
    CdCertificate cert;
    cert.params = p;
    cert.rho_analytic = p.n - 1 - (p.n + p.alpha) / 4.0;
    cert.N = -p.alpha;
    return cert;
}

/// F(a, b) = (a d - b^2) / d^2 with d = (1-a)^2 + b^2, evaluated in the
/// algebraically equivalent form u(u-1) with u = (1-a)/d, which is free of
/// the cancellation the raw numerator suffers near the boundary.
/// Singular at (1, 0).
inline double F(double a, double b) {
    const double d = (1.0 - a) * (1.0 - a) + b * b;
    if (d == 0.0) throw std::domain_error("F: singular at (a, b) = (1, 0)");
    const double u = (1.0 - a) / d;
    return u * (u - 1.0);
}

/// Generalization with exponent parameter p > 0; p = 1 recovers F.
inline double F_p(double p, double a, double b) {
    if (!(p > 0.0)) throw std::invalid_argument("F_p: p must be positive");
    const double d = (1.0 - a) * (1.0 - a) + b * b;
    if (d == 0.0) throw std::domain_error("F_p: singular at (a, b) = (1, 0)");
    const double u = (1.0 - a) / d;
    return u * (u - 1.0) + (p - 1.0) * (b * b) / (d * d);
}

struct DiskMinimum {
    double value = 0.0;
    std::array<double, 2> argmin{0.0, 0.0};
};

namespace detail {

// Non-throwing F_p with radial clamp onto the disk of given radius; the
// singular point maps to +inf so it never wins a minimization.
inline double fp_clamped(double p, double radius, double a, double b) {
    const double r = std::hypot(a, b);
    if (r > radius && r > 0.0) {
        const double scale = radius / r;
        a *= scale;
        b *= scale;
    }
    const double d = (1.0 - a) * (1.0 - a) + b * b;
    if (d < 1e-300) return std::numeric_limits<double>::infinity();
    const double u = (1.0 - a) / d;
    return u * (u - 1.0) + (p - 1.0) * (b * b) / (d * d);
}

inline bool better(double v, const std::array<double, 2>& x, double v_best,
                   const std::array<double, 2>& x_best) {
    if (v < v_best) return true;
    if (v > v_best) return false;
    return x < x_best;  // lexicographic tie-break keeps reductions deterministic
}

// Nelder–Mead on the clamped objective, started near x0 with simplex scale h0.
inline DiskMinimum nelder_mead_disk(double p, double radius, std::array<double, 2> x0,
                                    double h0, int max_iter = 400) {
    struct Vertex {
        std::array<double, 2> x;
        double f;
    };
    auto eval = [&](const std::array<double, 2>& x) { return fp_clamped(p, radius, x[0], x[1]); };
    std::array<Vertex, 3> v{Vertex{x0, eval(x0)},
                            Vertex{{x0[0] + h0, x0[1]}, 0.0},
                            Vertex{{x0[0], x0[1] + h0}, 0.0}};
    v[1].f = eval(v[1].x);
    v[2].f = eval(v[2].x);
    auto order = [&] {
        std::sort(v.begin(), v.end(), [](const Vertex& a, const Vertex& b) {
            return a.f < b.f || (a.f == b.f && a.x < b.x);
        });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        const std::array<double, 2> centroid{0.5 * (v[0].x[0] + v[1].x[0]),
                                             0.5 * (v[0].x[1] + v[1].x[1])};
        auto affine = [&](double t) {
            return std::array<double, 2>{centroid[0] + t * (centroid[0] - v[2].x[0]),
                                         centroid[1] + t * (centroid[1] - v[2].x[1])};
        };
        const auto xr = affine(1.0);
        const double fr = eval(xr);
        if (fr < v[0].f) {
            const auto xe = affine(2.0);
            const double fe = eval(xe);
            v[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < v[1].f) {
            v[2] = {xr, fr};
        } else {
            const auto xc = affine(-0.5);
            const double fc = eval(xc);
            if (fc < v[2].f) {
                v[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    v[i].x = {0.5 * (v[i].x[0] + v[0].x[0]), 0.5 * (v[i].x[1] + v[0].x[1])};
                    v[i].f = eval(v[i].x);
                }
            }
        }
        order();
        const double spread = std::abs(v[2].f - v[0].f);
        const double size = std::hypot(v[2].x[0] - v[0].x[0], v[2].x[1] - v[0].x[1]) +
                            std::hypot(v[1].x[0] - v[0].x[0], v[1].x[1] - v[0].x[1]);
        if (size < 1e-14 && spread < 1e-15) break;
    }
    // Report the clamped representative of the winning vertex.
    std::array<double, 2> x = v[0].x;
    const double r = std::hypot(x[0], x[1]);
    if (r > radius && r > 0.0) {
        x[0] *= radius / r;
        x[1] *= radius / r;
    }
    return {v[0].f, x};
}

}  // namespace detail

/// Global minimum of F_p over the closed disk of the given radius: dense
/// polar grid followed by local refinement from the best cells. Accurate to
/// about 1e-9 for the smooth cases that arise here (p >= 1).
inline DiskMinimum min_F_disk(double radius, double p, std::size_t angular_cells = 1000,
                              std::size_t radial_cells = 1000) {
    if (!(radius >= 0.0 && radius <= 1.0))
        throw std::invalid_argument("min_F_disk: radius must be in [0, 1]");
    if (!(p >= 1.0)) throw std::invalid_argument("min_F_disk: requires p >= 1");
    if (radius == 0.0) return {0.0, {0.0, 0.0}};

    struct Candidate {
        double f = std::numeric_limits<double>::infinity();
        std::array<double, 2> x{0.0, 0.0};
    };
    constexpr std::size_t kKeep = 10;
    const unsigned workers = thread_budget();
    std::vector<std::array<Candidate, kKeep>> chunk_best(std::max<unsigned>(workers, 1u) + 1);

    parallel_chunks(radial_cells + 1, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        auto& best = chunk_best[chunk];
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = radius * static_cast<double>(i) / static_cast<double>(radial_cells);
            for (std::size_t k = 0; k < angular_cells; ++k) {
                const double psi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(angular_cells);
                const std::array<double, 2> x{r * std::cos(psi), r * std::sin(psi)};
                const double f = detail::fp_clamped(p, radius, x[0], x[1]);
                if (detail::better(f, x, best[kKeep - 1].f, best[kKeep - 1].x)) {
                    best[kKeep - 1] = {f, x};
                    for (std::size_t j = kKeep - 1; j > 0; --j) {
                        if (detail::better(best[j].f, best[j].x, best[j - 1].f, best[j - 1].x))
                            std::swap(best[j], best[j - 1]);
                        else
                            break;
                    }
                }
                if (i == 0) break;  // r = 0 is a single point
            }
        }
    });

    std::array<Candidate, kKeep> seeds;
    for (const auto& cb : chunk_best)
        for (const auto& c : cb)
            if (detail::better(c.f, c.x, seeds[kKeep - 1].f, seeds[kKeep - 1].x)) {
                seeds[kKeep - 1] = c;
                for (std::size_t j = kKeep - 1; j > 0; --j) {
                    if (detail::better(seeds[j].f, seeds[j].x, seeds[j - 1].f, seeds[j - 1].x))
                        std::swap(seeds[j], seeds[j - 1]);
                    else
                        break;
                }
            }

    const double h0 = std::max(radius / static_cast<double>(radial_cells), 1e-5);
    DiskMinimum out{seeds[0].f, seeds[0].x};
    for (const auto& seed : seeds) {
        if (!std::isfinite(seed.f)) continue;
        const DiskMinimum local = detail::nelder_mead_disk(p, radius, seed.x, h0);
        if (detail::better(local.value, local.argmin, out.value, out.argmin)) out = local;
    }
    return out;
}

/// Generalized Ricci quadratic form Ric(theta, theta) at the point of S^n
/// with polar angle theta_y from the axis, for the unit tangent decomposed
/// by phi_dir between the meridian direction (phi_dir = 0) and directions
/// orthogonal to the (x, y)-plane (phi_dir = pi/2).
///
/// Closed form: with a = <x,y> = s cos(theta_y), b = <x,theta> =
/// s sin(theta_y) cos(phi_dir) and D = |y-x|^2 = 1 - 2a + s^2,
///
///     Ric(theta, theta) = (n-1) + (n+alpha) (a D - b^2) / D^2.
///
/// Note D carries the full |x|^2 = a^2 + b^2 + c^2 including the component c
/// of x orthogonal to span{y, theta}; only when c = 0 (phi_dir = 0) does the
/// expression collapse to F(a, b). Since (aD - b^2)/D^2 >= F(a, sqrt(b^2+c^2))
/// pointwise, the disk minimum of F still lower-bounds this form everywhere,
/// which is how the certificate is recovered.
inline double generalized_ricci_quadform(const SphereParams& p, double theta_y, double phi_dir) {
    p.validate();
    if (p.alpha < -static_cast<double>(p.n))
        throw std::domain_error("generalized_ricci_quadform: requires alpha >= -n");
    if (!(theta_y >= 0.0 && theta_y <= kPi))
        throw std::domain_error("generalized_ricci_quadform: theta_y must be in [0, pi]");
    if (!(phi_dir >= 0.0 && phi_dir <= 0.5 * kPi))
        throw std::domain_error("generalized_ricci_quadform: phi_dir must be in [0, pi/2]");
    if (p.alpha == -static_cast<double>(p.n)) return p.n - 1.0;  // constant density
    const double a = p.s * std::cos(theta_y);
    const double b = p.s * std::sin(theta_y) * std::cos(phi_dir);
    const double D = detail::chord2(p.s, theta_y);  // 1 - 2a + s^2, stably
    return (p.n - 1.0) + (p.n + p.alpha) * (a * D - b * b) / (D * D);
}

/// Independent check of the closed form: central second difference of the
/// ambient distance-to-x along the great circle t -> cos(t) y + sin(t) theta,
/// assembled into Ric(theta, theta) = (n-1) - (N-n) * Hessian ratio.
/// Agrees with generalized_ricci_quadform to O(h^2).
inline double fd_ricci_oracle(const SphereParams& p, double theta_y, double phi_dir, double h) {
    p.validate();
    if (p.alpha < -static_cast<double>(p.n))
        throw std::domain_error("fd_ricci_oracle: requires alpha >= -n");
    if (!(h >= 1e-6 && h <= 1e-2))
        throw std::invalid_argument("fd_ricci_oracle: h must lie in [1e-6, 1e-2]");
    if (!(theta_y >= 0.0 && theta_y <= kPi) || !(phi_dir >= 0.0 && phi_dir <= 0.5 * kPi))
        throw std::domain_error("fd_ricci_oracle: angle out of range");

    const std::size_t dim = static_cast<std::size_t>(p.n) + 1;
    std::vector<double> y(dim, 0.0), tangent(dim, 0.0), x(dim, 0.0);
    y[0] = std::cos(theta_y);
    y[1] = std::sin(theta_y);
    tangent[0] = -std::sin(theta_y) * std::cos(phi_dir);
    tangent[1] = std::cos(theta_y) * std::cos(phi_dir);
    tangent[2] = std::sin(phi_dir);
    x[0] = p.s;

    auto dist_along = [&](double t) {
        const double ct = std::cos(t), st = std::sin(t);
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double zi = ct * y[i] + st * tangent[i] - x[i];
            acc += zi * zi;
        }
        return std::sqrt(acc);
    };

    const double f0 = dist_along(0.0);
    auto ratio = [&](double step) {
        return (dist_along(step) - 2.0 * f0 + dist_along(-step)) / (step * step * f0);
    };
    const double r1 = ratio(h);
    const double r2 = ratio(2.0 * h);
    if (std::abs(r1 - r2) > 1e-3 * std::max(1.0, std::abs(r1)))
        throw FdStepError("fd_ricci_oracle: second difference unstable between h and 2h");
    return (p.n - 1.0) + (p.n + p.alpha) * r1;
}

/// Full certificate: analytic bound plus the numerically minimized Ricci
/// form over the (a, b) disk of radius 1 (uniform in x) or radius s.
inline CdCertificate certify(const SphereParams& p, bool uniform_in_x) {
    CdCertificate cert = analytic_cd(p);
    const double radius = uniform_in_x ? 1.0 : p.s;
    const DiskMinimum dm = min_F_disk(radius, 1.0);
    cert.rho_numeric = (p.n - 1.0) + (p.n + p.alpha) * dm.value;
    cert.argmin = dm.argmin;
    cert.search_radius = radius;
    if (cert.rho_numeric < cert.rho_analytic - 1e-9)
        throw CertificationError("certify: numeric curvature fell below the analytic bound");
    return cert;
}

// ---------------------------------------------------------------------------
// General norms (replacing the Euclidean distance in the density)
// ---------------------------------------------------------------------------

/// A positively 1-homogeneous C^2 norm on R^(n+1), given by its evaluator.
/// Derivatives are taken by central finite differences with step fd_step.
struct NormSpec {
    std::function<double(std::span<const double>)> evaluate;
    double fd_step = 1e-4;
};

struct NormEpsilonResult {
    double epsilon = 0.0;
    std::vector<double> witness_y;
    std::vector<double> witness_theta;
};

namespace detail {

inline double norm_quad_ratio(const NormSpec& norm, std::span<const double> y,
                              std::span<const double> t, double h) {
    const std::size_t dim = y.size();
    std::vector<double> plus(dim), minus(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        plus[i] = y[i] + h * t[i];
        minus[i] = y[i] - h * t[i];
    }
    const double ny = norm.evaluate(y);
    return (norm.evaluate(plus) - 2.0 * ny + norm.evaluate(minus)) / (h * h * ny);
}

inline void renormalize(std::vector<double>& v) {
    double norm2 = 0.0;
    for (double c : v) norm2 += c * c;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : v) c *= inv;
}

inline void project_tangent(std::vector<double>& t, const std::vector<double>& y) {
    double dot = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) dot += t[i] * y[i];
    for (std::size_t i = 0; i < t.size(); ++i) t[i] -= dot * y[i];
    renormalize(t);
}

}  // namespace detail

/// Checks positive 1-homogeneity and the Euler identity <grad ||y||, y> = ||y||
/// on seeded sample points; throws std::invalid_argument on failure.
inline void validate_norm(const NormSpec& norm, int n, std::uint64_t seed = 0,
                          double homogeneity_tol = 1e-8, double euler_tol = 1e-5) {
    if (!norm.evaluate) throw std::invalid_argument("NormSpec: missing evaluator");
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    RngStream rng(seed, 0x4e4f524d);  // dedicated validation stream
    std::vector<double> y(dim), scaled(dim), probe(dim);
    for (int trial = 0; trial < 16; ++trial) {
        rng.unit_vector(y);
        const double ny = norm.evaluate(y);
        if (!(ny > 0.0)) throw std::invalid_argument("NormSpec: norm must be positive on S^n");
        for (double lambda : {0.5, 2.0}) {
            for (std::size_t i = 0; i < dim; ++i) scaled[i] = lambda * y[i];
            if (std::abs(norm.evaluate(scaled) - lambda * ny) > homogeneity_tol * ny)
                throw std::invalid_argument("NormSpec: homogeneity check failed");
        }
        double euler = 0.0;
        const double h = norm.fd_step;
        for (std::size_t i = 0; i < dim; ++i) {
            probe = y;
            probe[i] = y[i] + h;
            const double fp = norm.evaluate(probe);
            probe[i] = y[i] - h;
            const double fm = norm.evaluate(probe);
            euler += y[i] * (fp - fm) / (2.0 * h);
        }
        if (std::abs(euler - ny) > euler_tol * ny)
            throw std::invalid_argument("NormSpec: Euler identity check failed");
    }
}

/// Estimates eps = inf <Hess ||y|| theta, theta> / ||y|| over orthonormal
/// pairs (y, theta) on S^n, by seeded sampling plus projected-gradient
/// descent. The estimate is an upper bound on the true infimum. Negative
/// values are returned, not errors (the condition simply fails).
inline NormEpsilonResult norm_epsilon(const NormSpec& norm, int n, std::size_t samples,
                                      double h, std::uint64_t seed) {
    validate_norm(norm, n, seed);
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    RngStream rng(seed, 0);

    struct Pair {
        std::vector<double> y, t;
        double value;
    };
    constexpr std::size_t kDescents = 10;
    std::vector<Pair> best;

    std::vector<double> y(dim), t(dim);
    for (std::size_t i = 0; i < samples; ++i) {
        rng.unit_vector(y);
        rng.unit_vector(t);
        detail::project_tangent(t, y);
        const double v = detail::norm_quad_ratio(norm, y, t, h);
        if (best.size() < kDescents || v < best.back().value) {
            best.push_back({y, t, v});
            std::sort(best.begin(), best.end(),
                      [](const Pair& a, const Pair& b) { return a.value < b.value; });
            if (best.size() > kDescents) best.pop_back();
        }
    }

    NormEpsilonResult out;
    out.epsilon = best.front().value;
    out.witness_y = best.front().y;
    out.witness_theta = best.front().t;

    const double step = 1e-2;
    const double grad_h = 1e-4;
    std::vector<double> gy(dim), gt(dim);
    for (auto& pair : best) {
        auto& py = pair.y;
        auto& pt = pair.t;
        for (int iter = 0; iter < 50; ++iter) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double yi = py[i];
                py[i] = yi + grad_h;
                const double fp = detail::norm_quad_ratio(norm, py, pt, h);
                py[i] = yi - grad_h;
                const double fm = detail::norm_quad_ratio(norm, py, pt, h);
                py[i] = yi;
                gy[i] = (fp - fm) / (2.0 * grad_h);
                const double ti = pt[i];
                pt[i] = ti + grad_h;
                const double gp = detail::norm_quad_ratio(norm, py, pt, h);
                pt[i] = ti - grad_h;
                const double gm = detail::norm_quad_ratio(norm, py, pt, h);
                pt[i] = ti;
                gt[i] = (gp - gm) / (2.0 * grad_h);
            }
            for (std::size_t i = 0; i < dim; ++i) {
                py[i] -= step * gy[i];
                pt[i] -= step * gt[i];
            }
            detail::renormalize(py);
            detail::project_tangent(pt, py);
            const double v = detail::norm_quad_ratio(norm, py, pt, h);
            if (v < out.epsilon) {
                out.epsilon = v;
                out.witness_y = py;
                out.witness_theta = pt;
            }
        }
    }
    return out;
}

/// Curvature bound implied by a norm satisfying the eps-condition.
inline double implied_rho(double epsilon, int n, double alpha) {
    return n - 1.0 - (1.0 - epsilon) * (n + alpha);
}

/// Range of alpha with positive implied curvature: (-1, (n-1)/(1-eps) - n).
/// The upper end is +inf when eps >= 1.
inline std::pair<double, double> admissible_alpha_range(double epsilon, int n) {
    const double lo = -1.0;
    if (epsilon >= 1.0) return {lo, std::numeric_limits<double>::infinity()};
    return {lo, (n - 1.0) / (1.0 - epsilon) - n};
}

}  // namespace cdsphere
