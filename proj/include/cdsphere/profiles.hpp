// 1D model profile phi(t) = c / cosh(sqrt(delta) t)^(alpha+1) and the
// isoperimetric machinery built on it: the profile lower bound phi o Phi^-1,
// the Cheeger-type constant, two-level tail bounds, and verification of the
// cap case against the actual sphere marginals.
//
// Requires alpha in (-1, 3n-4) so that rho = n-1-(n+alpha)/4 and
// delta = rho/(alpha+1) are positive. The CDF is tabulated on [0, T] with
// T = max(10, 30/sqrt(delta)); beyond T an analytic series for the
// exponential tail takes over, so quantiles remain available arbitrarily
// far out in the tails.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cdsphere/measures.hpp"
#include "cdsphere/quadrature.hpp"

namespace cdsphere {

namespace detail {

// log(cosh(x)) without overflow for large |x|.
inline double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453094172321214581766;
}

// int_A^inf cosh(x)^(-m) dx by the binomial series in e^(-2A); accurate when
// m * e^(-2A) is comfortably below 1 (we only call it with A >= ~8).
inline double sech_tail_integral(double m, double A) {
    const double q = std::exp(-2.0 * A);
    double term = 1.0;  // (-1)^j C_j q^j, iterated
    double sum = 0.0;
    for (int j = 0; j < 400; ++j) {
        sum += term / (m + 2.0 * j);
        const double next = term * ((m + j) / (j + 1.0)) * (-q);
        if (std::abs(next) < 1e-18 * std::abs(sum) * (m + 2.0 * j)) break;
        term = next;
    }
    return std::exp(m * (0.6931471805599453094172321214581766 - A)) * sum;
}

}  // namespace detail

/// The model density phi, its CDF Phi, and the bounds derived from them.
/// Immutable and thread-shareable after construction.
class ModelProfile {
  public:
    explicit ModelProfile(SphereParams params, std::size_t panels = 1024)
        : p_(params) {
        p_.validate();
        const double upper = 3.0 * p_.n - 4.0;
        if (!(p_.alpha > -1.0 && p_.alpha < upper))
            throw std::domain_error("ModelProfile: requires alpha in (-1, 3n-4)");
        rho_ = p_.n - 1 - (p_.n + p_.alpha) / 4.0;
        m_ = p_.alpha + 1.0;
        delta_ = rho_ / m_;
        k_ = std::sqrt(delta_);
        // c = sqrt(delta) / (2 I(m)), I(m) = int_0^inf cosh^(-m)
        //              = (sqrt(pi)/2) Gamma(m/2) / Gamma((m+1)/2).
        log_half_integral_ = 0.5 * std::log(kPi) - 0.6931471805599453 +
                             std::lgamma(0.5 * m_) - std::lgamma(0.5 * (m_ + 1.0));
        c_norm_ = std::exp(std::log(k_) - 0.6931471805599453 - log_half_integral_);

        horizon_ = std::max(10.0, 30.0 / k_);
        nodes_.resize(panels + 1);
        cum_.assign(panels + 1, 0.0);
        for (std::size_t i = 0; i <= panels; ++i)
            nodes_[i] = horizon_ * static_cast<double>(i) / static_cast<double>(panels);
        const double panel_tol = 1e-13 / static_cast<double>(panels);
        for (std::size_t i = 0; i < panels; ++i) {
            const auto r = integrate_adaptive([this](double t) { return phi(t); }, nodes_[i],
                                              nodes_[i + 1], panel_tol);
            cum_[i + 1] = cum_[i] + r.value;
        }
    }

    const SphereParams& params() const { return p_; }
    double rho() const { return rho_; }
    double delta() const { return delta_; }
    double c_norm() const { return c_norm_; }
    double horizon() const { return horizon_; }

    double log_phi(double t) const {
        return std::log(c_norm_) - m_ * detail::log_cosh(k_ * t);
    }

    /// Model density; even, unimodal at 0, phi(0) = c_norm.
    double phi(double t) const { return std::exp(log_phi(t)); }

    /// CDF Phi(t) = int_-inf^t phi.
    double Phi(double t) const {
        if (t < 0.0) return tail(-t);
        return 1.0 - tail(t);
    }

    /// Upper tail int_r^inf phi for r >= 0; decreasing, tail(0) = 1/2.
    double tail_bound(double r) const {
        if (!(r >= 0.0)) throw std::domain_error("tail_bound: r must be >= 0");
        return tail(r);
    }

    /// Inverse CDF on (0, 1); solved on the lighter tail side by bracketed
    /// Newton so it stays accurate arbitrarily far out.
    double Phi_inv(double u) const {
        if (!(u > 0.0 && u < 1.0)) throw std::domain_error("Phi_inv: u must be in (0, 1)");
        if (u == 0.5) return 0.0;
        const double w = std::min(u, 1.0 - u);  // target upper-tail mass
        double lo = 0.0, hi = horizon_;
        while (tail(hi) > w) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) break;
        }
        double t = 0.5 * (lo + hi);
        for (int iter = 0; iter < 200; ++iter) {
            const double f = tail(t) - w;  // decreasing in t
            if (std::abs(f) <= 1e-14 * std::max(w, 1e-300) + 1e-300) break;
            if (f > 0.0)
                lo = t;
            else
                hi = t;
            if (hi - lo <= 1e-14 * (1.0 + hi)) break;
            double next = t + f / phi(t);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            t = next;
        }
        return u < 0.5 ? -t : t;
    }

    /// Isoperimetric lower bound phi(Phi^-1(v)); symmetric about v = 1/2.
    double isop_lower(double v) const {
        if (!(v > 0.0 && v < 1.0)) throw std::domain_error("isop_lower: v must be in (0, 1)");
        return phi(Phi_inv(std::min(v, 1.0 - v)));
    }

    /// Cheeger-type constant sqrt(delta) / int_0^inf cosh(t)^-(1+alpha) dt.
    double cheeger_lower() const { return std::exp(std::log(k_) - log_half_integral_); }

    /// Asymptotic two-level tail form with user-supplied constants (c, C):
    /// Gaussian-type decay up to the crossover radius sqrt((alpha+1)/rho),
    /// exponential beyond. A plotting overlay; the constants are not pinned
    /// by the theory, so nothing is asserted against this form.
    double two_level_overlay(double r, double c, double C) const {
        if (!(r >= 0.0)) throw std::domain_error("two_level_overlay: r must be >= 0");
        const double crossover = std::sqrt(m_ / rho_);
        if (r <= crossover)
            return C * std::min(1.0, std::sqrt(m_)) * std::exp(-c * rho_ * r * r) /
                   (1.0 + std::sqrt(rho_) * r);
        return C * std::min(1.0, 1.0 / std::sqrt(m_)) * std::exp(-c * std::sqrt(m_ * rho_) * r);
    }

  private:
    double tail(double r) const {
        if (r >= horizon_) return (c_norm_ / k_) * detail::sech_tail_integral(m_, k_ * r);
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
        const std::size_t j = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
        const auto local = integrate_adaptive([this](double t) { return phi(t); }, nodes_[j], r,
                                              1e-15);
        const double cum = std::min(cum_[j] + local.value, 0.5);
        return 0.5 - cum;
    }

    SphereParams p_;
    double rho_ = 0.0;
    double delta_ = 0.0;
    double m_ = 0.0;   // alpha + 1
    double k_ = 0.0;   // sqrt(delta)
    double c_norm_ = 0.0;
    double log_half_integral_ = 0.0;  // log int_0^inf cosh^(-m)
    double horizon_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> cum_;
};

/// Minkowski boundary measure of the geodesic cap {theta(y) <= theta0}: the
/// eps-extension of a cap is the cap of radius theta0 + eps, so the boundary
/// measure equals the marginal pdf at theta0.
inline double cap_boundary_measure(const MarginalDensity& marginal, double theta0) {
    if (!(theta0 > 0.0 && theta0 < kPi))
        throw std::domain_error("cap_boundary_measure: theta0 must be in (0, pi)");
    return marginal.pdf(theta0);
}

struct CapCheckRow {
    double theta0 = 0.0;
    double v = 0.0;                 // cap mass
    double boundary_measure = 0.0;
    double lower_bound = 0.0;
    double slack = 0.0;             // boundary_measure - lower_bound
};

struct CapCheckReport {
    std::vector<CapCheckRow> rows;
    double worst_slack = 0.0;
    double worst_theta0 = 0.0;
    bool ok = false;
};

/// Verifies the isoperimetric lower bound on geodesic caps of both
/// orientations over a theta0 grid. This is a proven inequality, so a
/// negative worst slack (beyond -1e-8) indicates an implementation bug.
inline CapCheckReport isop_check_caps(const SphereParams& params, std::size_t grid_size,
                                      double quad_tol = 1e-10) {
    const MarginalDensity marginal(params, quad_tol);
    const ModelProfile profile(params);
    CapCheckReport report;
    report.rows.reserve(grid_size);
    report.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double theta0 = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        CapCheckRow row;
        row.theta0 = theta0;
        row.boundary_measure = cap_boundary_measure(marginal, theta0);
        row.v = marginal.cdf(theta0);
        // Both cap orientations ({theta <= theta0} with mass v and
        // {theta >= theta0} with mass 1-v) share this boundary measure; the
        // model bound is even in v so the smaller side covers both. The
        // upper mass comes from cdf_upper to keep tiny tails exact.
        const double side = std::min(row.v, marginal.cdf_upper(theta0));
        row.lower_bound = side > 0.0 ? profile.isop_lower(side) : 0.0;
        row.slack = row.boundary_measure - row.lower_bound;
        if (row.slack < report.worst_slack) {
            report.worst_slack = row.slack;
            report.worst_theta0 = theta0;
        }
        report.rows.push_back(row);
    }
    report.ok = report.worst_slack >= -1e-8;
    return report;
}

}  // namespace cdsphere
