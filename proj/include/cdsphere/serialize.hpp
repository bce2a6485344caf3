// JSON bindings for the public value types (nlohmann/json). Kept separate so
// the numeric headers do not pull in the JSON dependency.
#pragma once

#include <json.hpp>

#include "cdsphere/curvature.hpp"
#include "cdsphere/measures.hpp"
#include "cdsphere/sampling.hpp"
#include "cdsphere/spectral.hpp"

namespace cdsphere {

namespace detail {
// Non-finite doubles have no JSON representation; emit explicit nulls.
inline nlohmann::json num_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}
}  // namespace detail

inline void to_json(nlohmann::json& j, const SphereParams& p) {
    j = nlohmann::json{{"n", p.n}, {"alpha", p.alpha}, {"s", p.s}};
}

inline void from_json(const nlohmann::json& j, SphereParams& p) {
    j.at("n").get_to(p.n);
    j.at("alpha").get_to(p.alpha);
    j.at("s").get_to(p.s);
}

inline void to_json(nlohmann::json& j, const CdCertificate& c) {
    j = nlohmann::json{{"rho_analytic", c.rho_analytic},
                       {"N", c.N},
                       {"rho_numeric", c.rho_numeric},
                       {"argmin", c.argmin},
                       {"search_radius", c.search_radius}};
}

inline void to_json(nlohmann::json& j, const SpectralResult& r) {
    j = nlohmann::json{{"lambda_gap", r.lambda_gap},
                       {"sector", r.sector},
                       {"grids_used", r.grids_used},
                       {"extrapolated", r.extrapolated},
                       {"error_estimate", r.error_estimate}};
}

inline void to_json(nlohmann::json& j, const BoundCheck& c) {
    j = nlohmann::json{{"name", c.name},
                       {"lambda", c.lambda},
                       {"lower", detail::num_or_null(c.lower)},
                       {"upper", detail::num_or_null(c.upper)},
                       {"ok", c.ok}};
}

inline void to_json(nlohmann::json& j, const KsResult& r) {
    j = nlohmann::json{{"statistic", r.statistic}, {"p_value", r.p_value}};
}

inline void to_json(nlohmann::json& j, const CapCheckRow& r) {
    j = nlohmann::json{{"theta0", r.theta0},
                       {"v", r.v},
                       {"boundary_measure", r.boundary_measure},
                       {"lower_bound", r.lower_bound},
                       {"slack", r.slack}};
}

inline void to_json(nlohmann::json& j, const ConcentrationRow& r) {
    j = nlohmann::json{{"r", r.r},
                       {"exact", r.exact},
                       {"empirical", r.empirical},
                       {"model_tail", r.model_tail},
                       {"ok", r.ok}};
}

inline void to_json(nlohmann::json& j, const AlphaScanRow& r) {
    j = nlohmann::json{{"alpha", r.alpha},
                       {"s", r.s},
                       {"lambda", detail::num_or_null(r.lambda)},
                       {"sector", r.sector},
                       {"rho", r.rho},
                       {"ratio", detail::num_or_null(r.ratio)},
                       {"lower_bound_cor14", detail::num_or_null(r.lower_bound_cor14)},
                       {"bmz_low", detail::num_or_null(r.bmz_low)},
                       {"bmz_high", detail::num_or_null(r.bmz_high)}};
    if (!r.error.empty()) j["error"] = r.error;
}

}  // namespace cdsphere
