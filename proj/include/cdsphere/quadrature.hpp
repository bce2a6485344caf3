// Adaptive Gauss–Kronrod 15(7) quadrature on finite intervals.
//
// The per-panel error estimate is |K15 - G7|, which overestimates the actual
// Kronrod error; panels are split until the sum of estimates meets the
// requested absolute tolerance or the subdivision budget runs out.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cdsphere/errors.hpp"

namespace cdsphere {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // sum of per-panel estimates
    bool converged = false;
    std::size_t panels = 0;
};

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kGk15WeightsK = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGk15WeightsG = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kGk15WeightsK[7];
    double resg = fc * kGk15WeightsG[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kGk15Nodes[j];
        const double fsum = f(c - dx) + f(c + dx);
        resk += fsum * kGk15WeightsK[j];
        if (j % 2 == 1) resg += fsum * kGk15WeightsG[j / 2];
    }
    value = resk * half;
    err = std::abs((resk - resg) * half);
}

}  // namespace detail

/// Integrates f over [a, b] to absolute tolerance abs_tol. Does not throw on
/// non-convergence; inspect .converged (and .error) on the result.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                    std::size_t max_panels = 200000) {
    QuadratureResult out;
    if (!(a < b)) {
        out.converged = true;
        return out;
    }
    struct Panel {
        double a, b, tol;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, abs_tol});
    const double min_width = (b - a) * 0x1p-48;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        double v, e;
        detail::gk15_panel(f, p.a, p.b, v, e);
        const double width = p.b - p.a;
        if (e <= p.tol || width <= min_width || out.panels >= max_panels) {
            out.value += v;
            out.error += e;
            ++out.panels;
        } else {
            const double mid = 0.5 * (p.a + p.b);
            stack.push_back({mid, p.b, 0.5 * p.tol});
            stack.push_back({p.a, mid, 0.5 * p.tol});
        }
    }
    out.converged = out.error <= abs_tol;
    return out;
}

/// Same as integrate_adaptive but throws QuadratureError when the tolerance
/// was not reached; the exception carries the achieved error estimate.
template <class F>
double integrate_or_throw(const F& f, double a, double b, double abs_tol,
                          const char* what = "quadrature did not converge") {
    const QuadratureResult r = integrate_adaptive(f, a, b, abs_tol);
    if (!r.converged) throw QuadratureError(what, r.error);
    return r.value;
}

}  // namespace cdsphere
