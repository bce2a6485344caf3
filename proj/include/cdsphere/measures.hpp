// Weighted-sphere measure family: parameters, the 1D angular marginal, its
// normalization constants, CDF and quantiles.
//
// A point mass at distance s from the center of the unit n-sphere induces a
// density proportional to |y - x|^-(n+alpha) on S^n. By rotational symmetry
// everything reduces to the marginal in the polar angle theta from the axis:
//
//     w(theta) = sin^(n-1)(theta) * (1 - 2 s cos(theta) + s^2)^(-(n+alpha)/2)
//
// All normalizations are computed by adaptive quadrature in log-scaled
// arithmetic so that large exponents (n+alpha) and s close to 1 do not
// overflow. Instances are immutable after construction and may be shared
// freely across threads.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdsphere/errors.hpp"
#include "cdsphere/quadrature.hpp"

namespace cdsphere {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Maximum accepted pole distance; the normalization degenerates as s -> 1.
inline constexpr double kMaxS = 1.0 - 1e-9;

/// The triple identifying a measure in the family. Only |x| matters by
/// rotational symmetry; full vectors appear only when samples are lifted
/// to the sphere.
struct SphereParams {
    int n = 2;        // sphere dimension, >= 2
    double alpha = 1; // exponent
    double s = 0;     // |x| in [0, 1)

    void validate() const {
        if (n < 2) throw std::invalid_argument("SphereParams: n must be >= 2");
        if (!(alpha == alpha)) throw std::invalid_argument("SphereParams: alpha is NaN");
        if (!(s >= 0.0 && s <= kMaxS))
            throw std::invalid_argument(
                "SphereParams: s must lie in [0, 1 - 1e-9], got " + std::to_string(s));
    }

    /// Additional range demanded by curvature-dimension certificates.
    void validate_cd() const {
        validate();
        if (alpha < -static_cast<double>(n))
            throw std::domain_error("SphereParams: alpha must be >= -n for CD certificates");
    }
};

namespace detail {

// 1 - 2 s cos(theta) + s^2, evaluated as (1-s)^2 + 4 s sin^2(theta/2) to stay
// accurate near theta = 0 when s is close to 1.
inline double chord2(double s, double theta) {
    const double sh = std::sin(0.5 * theta);
    return (1.0 - s) * (1.0 - s) + 4.0 * s * sh * sh;
}

}  // namespace detail

/// log of the unnormalized marginal weight w(theta); -inf at the poles.
inline double log_marginal_weight(const SphereParams& p, double theta) {
    const double sn = std::sin(theta);
    if (sn <= 0.0) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(p.n - 1) * std::log(sn) -
           0.5 * (p.n + p.alpha) * std::log(detail::chord2(p.s, theta));
}

/// The 1D angular marginal of a weighted-sphere measure. Construction
/// computes the normalization once (adaptive quadrature, absolute tolerance
/// quad_tol) and caches a cumulative table for CDF/quantile queries.
class MarginalDensity {
  public:
    explicit MarginalDensity(SphereParams params, double quad_tol = 1e-10,
                             std::size_t panels = 1024)
        : p_(params), quad_tol_(quad_tol) {
        p_.validate();

        // Panel grid: uniform in the interior plus dyadic refinement toward
        // both poles, so that a density peak at scale 1 - s (arbitrarily
        // close to 0 or pi) always intersects quadrature nodes.
        const double h = kPi / static_cast<double>(panels);
        nodes_.push_back(0.0);
        for (double g = 1e-12; g < h; g *= 2.0) nodes_.push_back(g);
        for (std::size_t i = 1; i < panels; ++i) nodes_.push_back(h * static_cast<double>(i));
        for (double g = h; g > 1e-12; g *= 0.5) nodes_.push_back(kPi - 0.5 * g);
        nodes_.push_back(kPi);
        std::sort(nodes_.begin(), nodes_.end());
        nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

        // Scale factor: max of log w, located by a scan over panel midpoints
        // followed by iterative zooming around the best cell.
        log_scale_ = -std::numeric_limits<double>::infinity();
        double best_theta = 0.5 * kPi;
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            const double mid = 0.5 * (nodes_[i] + nodes_[i + 1]);
            const double lw = log_unnormalized(mid);
            if (lw > log_scale_) {
                log_scale_ = lw;
                best_theta = mid;
            }
        }
        double window = h;
        for (int round = 0; round < 12; ++round) {
            const double lo = std::max(0.0, best_theta - window);
            const double hi = std::min(kPi, best_theta + window);
            for (int i = 0; i <= 32; ++i) {
                const double th = lo + (hi - lo) * i / 32.0;
                const double lw = log_unnormalized(th);
                if (lw > log_scale_) {
                    log_scale_ = lw;
                    best_theta = th;
                }
            }
            window /= 16.0;
        }

        cum_.assign(nodes_.size(), 0.0);
        double achieved = 0.0;
        auto tabulate = [&](double total_tol) {
            const double panel_tol = total_tol / static_cast<double>(nodes_.size());
            achieved = 0.0;
            for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
                const auto r = integrate_adaptive([this](double t) { return scaled_weight(t); },
                                                  nodes_[i], nodes_[i + 1], panel_tol);
                achieved += r.error;
                cum_[i + 1] = cum_[i] + r.value;
            }
            z_scaled_ = cum_.back();
        };
        tabulate(quad_tol);
        // Narrow peaks make the scaled mass small; repeat with the tolerance
        // tied to the measured mass so the CDF keeps relative accuracy.
        if (z_scaled_ > 0.0 && z_scaled_ < 0.01) tabulate(quad_tol * z_scaled_);
        if (!(z_scaled_ > 0.0) || achieved > quad_tol)
            throw QuadratureError("marginal normalization did not converge", achieved);

        // suffix sums of the same panels, so upper-tail masses can be formed
        // without subtractive cancellation
        cum_upper_.assign(nodes_.size(), 0.0);
        for (std::size_t i = nodes_.size() - 1; i-- > 0;)
            cum_upper_[i] = cum_upper_[i + 1] + (cum_[i + 1] - cum_[i]);

        haar_mass_ = integrate_or_throw(
            [this](double t) {
                return std::exp(static_cast<double>(p_.n - 1) * std::log(std::sin(t)));
            },
            0.0, kPi, quad_tol, "sin^(n-1) normalization did not converge");
    }

    const SphereParams& params() const { return p_; }

    /// log of the unnormalized weight w(theta); -inf at the poles.
    double log_unnormalized(double theta) const { return log_marginal_weight(p_, theta); }

    /// Normalized marginal pdf on [0, pi]; 0 at the endpoints for n >= 2.
    double pdf(double theta) const {
        check_theta(theta);
        if (theta <= 0.0 || theta >= kPi) return 0.0;
        return scaled_weight(theta) / z_scaled_;
    }

    /// Normalized marginal CDF; exactly 0 at 0 and 1 at pi.
    double cdf(double theta) const {
        check_theta(theta);
        return scaled_cdf(theta) / z_scaled_;
    }

    /// Mass of [theta, pi], accumulated from the right so that tiny upper
    /// tails keep full relative accuracy (1 - cdf loses them to rounding).
    double cdf_upper(double theta) const {
        check_theta(theta);
        if (theta <= 0.0) return 1.0;
        if (theta >= kPi) return 0.0;
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), theta);
        const std::size_t j = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
        const double local_tol = std::max(1e-14 * z_scaled_, 1e-300);
        const auto r = integrate_adaptive([this](double t) { return scaled_weight(t); }, theta,
                                          nodes_[j + 1], local_tol);
        return std::min((cum_upper_[j + 1] + r.value) / z_scaled_, 1.0);
    }

    /// Inverse CDF with |cdf(theta) - u| <= tol, by bracketed root refinement
    /// (bisection with safeguarded Newton steps). Throws ToleranceError with
    /// the final bracket if the tolerance cannot be met.
    double quantile(double u, double tol = 1e-10) const {
        if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u must be in [0, 1]");
        if (u == 0.0) return 0.0;
        if (u == 1.0) return kPi;

        const double target = u * z_scaled_;
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
        std::size_t j = static_cast<std::size_t>(std::distance(cum_.begin(), it));
        j = std::min(std::max<std::size_t>(j, 1), cum_.size() - 1) - 1;

        double lo = nodes_[j], hi = nodes_[j + 1];
        double theta = 0.5 * (lo + hi);
        const double f_tol = tol * z_scaled_;
        for (int iter = 0; iter < 200; ++iter) {
            const double f = scaled_cdf(theta) - target;
            if (std::abs(f) <= f_tol) return theta;
            if (f < 0.0)
                lo = theta;
            else
                hi = theta;
            if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * kPi) break;
            const double deriv = scaled_weight(theta);
            double next = theta - f / deriv;  // Newton, then clamp into bracket
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            theta = next;
        }
        if (std::abs(cdf(theta) - u) <= tol) return theta;
        throw ToleranceError("quantile: tolerance not reached", lo, hi);
    }

    double median() const { return quantile(0.5); }

    /// log of the 1D marginal normalization Z = int_0^pi w.
    double log_norm() const { return log_scale_ + std::log(z_scaled_); }

    /// Z itself; may overflow to +inf for extreme parameters (use log_norm).
    double z() const { return std::exp(log_norm()); }

    /// int_0^pi sin^(n-1), the Haar mass of the 1D angle coordinate.
    double haar_mass() const { return haar_mass_; }

    /// Value of int |y - x|^(-(n+alpha)) dsigma^n = Z / int sin^(n-1).
    double z_sphere() const { return std::exp(log_norm() - std::log(haar_mass_)); }

    /// Normalization constant c = 1 / z_sphere of the density on the sphere.
    double sphere_normalization() const { return std::exp(std::log(haar_mass_) - log_norm()); }

  private:
    static void check_theta(double theta) {
        if (!(theta >= 0.0 && theta <= kPi))
            throw std::domain_error("theta must lie in [0, pi]");
    }

    double scaled_weight(double theta) const {
        const double lw = log_unnormalized(theta);
        return std::isfinite(lw) ? std::exp(lw - log_scale_) : 0.0;
    }

    // CDF in scaled units (denominator z_scaled_), via the cumulative table
    // plus a short local integral.
    double scaled_cdf(double theta) const {
        if (theta <= 0.0) return 0.0;
        if (theta >= kPi) return z_scaled_;
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), theta);
        const std::size_t j = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
        const double local_tol = std::max(1e-14 * z_scaled_, 1e-300);
        const auto r = integrate_adaptive([this](double t) { return scaled_weight(t); },
                                          nodes_[j], theta, local_tol);
        return std::min(cum_[j] + r.value, z_scaled_);
    }

    SphereParams p_;
    double quad_tol_;
    double log_scale_ = 0.0;
    double z_scaled_ = 0.0;
    double haar_mass_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> cum_;
    std::vector<double> cum_upper_;
};

/// One-shot normalization constant c_x = 1 / int |y - x|^(-(n+alpha)) dsigma.
/// For repeated queries construct a MarginalDensity instead.
inline double sphere_normalization(const SphereParams& params) {
    return MarginalDensity(params).sphere_normalization();
}

}  // namespace cdsphere
