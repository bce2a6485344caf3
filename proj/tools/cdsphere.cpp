// cdsphere: command-line front end for the weighted-sphere measure library.
//
// One subcommand per pipeline; results go to stdout or --out as JSON or CSV.
// Exit codes: 0 success, 1 validation/usage or numerical failure, 2 a proven
// inequality was violated numerically (kept distinct so CI can flag math
// regressions separately from plumbing).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cdsphere/curvature.hpp"
#include "cdsphere/measures.hpp"
#include "cdsphere/profiles.hpp"
#include "cdsphere/sampling.hpp"
#include "cdsphere/serialize.hpp"
#include "cdsphere/spectral.hpp"
#include "cdsphere/version.hpp"

namespace {

using nlohmann::json;
using namespace cdsphere;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTheoremViolation = 2;

struct OutputTarget {
    std::string path = "-";

    std::ostream& open(std::unique_ptr<std::ofstream>& holder, bool binary = false) const {
        if (path == "-") return std::cout;
        holder = std::make_unique<std::ofstream>(
            path, binary ? std::ios::binary | std::ios::out : std::ios::out);
        if (!*holder) throw std::runtime_error("cannot open output file: " + path);
        return *holder;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json envelope(const std::string& command, json config, json result) {
    return json{{"version", kVersion},
                {"command", command},
                {"config", std::move(config)},
                {"result", std::move(result)}};
}

void emit_json(const OutputTarget& out, const json& j) {
    std::unique_ptr<std::ofstream> holder;
    std::ostream& os = out.open(holder);
    os << j.dump(2) << '\n';
}

void emit_csv(const OutputTarget& out, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
    std::unique_ptr<std::ofstream> holder;
    std::ostream& os = out.open(holder);
    os << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << fmt(row[i]);
        }
        os << '\n';
    }
}

struct CommonFlags {
    int n = 2;
    double alpha = 1.0;
    double s = 0.0;
    OutputTarget out;
    std::string format = "json";
    std::vector<std::string> tol_kv;  // raw name=value pairs from --tol
};

struct Tolerances {
    double quad = 1e-10;      // normalization / CDF quadrature
    double quantile = 1e-10;  // inverse-CDF root finding
};

// Parses --tol entries; unknown names are rejected.
Tolerances parse_tolerances(const std::vector<std::string>& kv) {
    Tolerances t;
    for (const std::string& entry : kv) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--tol expects name=value, got '" + entry + "'");
        const std::string name = entry.substr(0, eq);
        const double value = std::stod(entry.substr(eq + 1));
        if (!(value > 0.0)) throw std::invalid_argument("--tol " + name + " must be positive");
        if (name == "quad")
            t.quad = value;
        else if (name == "quantile")
            t.quantile = value;
        else
            throw std::invalid_argument("--tol: unknown tolerance '" + name + "'");
    }
    return t;
}

json tol_json(const Tolerances& t) {
    return json{{"quad", t.quad}, {"quantile", t.quantile}};
}

void add_param_flags(CLI::App* cmd, CommonFlags& f, bool with_alpha = true, bool with_s = true,
                     bool with_tol = false) {
    cmd->add_option("--n", f.n, "sphere dimension (>= 2)")->required();
    if (with_alpha) cmd->add_option("--alpha", f.alpha, "exponent alpha");
    if (with_s) cmd->add_option("--s", f.s, "pole distance |x| in [0, 1)");
    cmd->add_option("--out", f.out.path, "output path ('-' for stdout)");
    cmd->add_option("--format", f.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_tol)
        cmd->add_option("--tol", f.tol_kv, "tolerance override, name=value (quad, quantile)");
}

json params_json(const SphereParams& p) { return json(p); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature-dimension toolkit for weighted sphere measures"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // ---- density -----------------------------------------------------------
    CommonFlags density_f;
    std::size_t density_grid = 181;
    auto* density = app.add_subcommand("density", "tabulate the angular marginal (csv: theta,pdf,cdf)");
    add_param_flags(density, density_f, true, true, /*with_tol=*/true);
    density->add_option("--grid", density_grid, "number of theta samples");
    density->callback([&] {
        SphereParams p{density_f.n, density_f.alpha, density_f.s};
        const Tolerances tol = parse_tolerances(density_f.tol_kv);
        MarginalDensity md(p, tol.quad);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < density_grid; ++i) {
            const double theta = kPi * static_cast<double>(i) / static_cast<double>(density_grid - 1);
            rows.push_back({theta, md.pdf(theta), md.cdf(theta)});
        }
        if (density_f.format == "csv") {
            emit_csv(density_f.out, "theta,pdf,cdf", rows);
        } else {
            json result{{"sphere_normalization", md.sphere_normalization()},
                        {"log_norm", md.log_norm()},
                        {"median", md.median()},
                        {"rows", rows}};
            emit_json(density_f.out,
                      envelope("density",
                               {{"params", params_json(p)},
                                {"grid", density_grid},
                                {"tolerances", tol_json(tol)}},
                               result));
        }
    });

    // ---- cd-check ----------------------------------------------------------
    CommonFlags cd_f;
    bool cd_x_specific = false;
    auto* cd = app.add_subcommand("cd-check", "curvature-dimension certificate");
    add_param_flags(cd, cd_f);
    cd->add_flag("--x-specific", cd_x_specific,
                 "search the (a,b) disk of radius s instead of radius 1");
    cd->callback([&] {
        SphereParams p{cd_f.n, cd_f.alpha, cd_f.s};
        const CdCertificate cert = certify(p, /*uniform_in_x=*/!cd_x_specific);
        if (cd_f.format == "csv")
            throw CLI::ValidationError("cd-check", "cd-check emits JSON only");
        emit_json(cd_f.out, envelope("cd-check",
                                     {{"params", params_json(p)}, {"x_specific", cd_x_specific}},
                                     json(cert)));
    });

    // ---- min-f -------------------------------------------------------------
    CommonFlags minf_f;
    double minf_radius = 1.0, minf_p = 1.0;
    auto* minf = app.add_subcommand("min-f", "minimize the disk objective F_p");
    minf->add_option("--radius", minf_radius, "disk radius in [0, 1]");
    minf->add_option("--p", minf_p, "exponent parameter p >= 1");
    minf->add_option("--out", minf_f.out.path, "output path");
    minf->callback([&] {
        const DiskMinimum dm = min_F_disk(minf_radius, minf_p);
        emit_json(minf_f.out, envelope("min-f", {{"radius", minf_radius}, {"p", minf_p}},
                                       json{{"min", dm.value}, {"argmin", dm.argmin}}));
    });

    // ---- spectrum ----------------------------------------------------------
    CommonFlags spec_f;
    bool spec_no_audit = false;
    int spec_ell = -1;
    int spec_grid = 2048;
    auto* spectrum = app.add_subcommand("spectrum", "spectral gap and proven bound checks");
    add_param_flags(spectrum, spec_f);
    spectrum->add_flag("--no-audit", spec_no_audit, "skip the ell = 2 sector audit");
    spectrum->add_option("--ell", spec_ell, "query a single harmonic sector instead of the gap");
    spectrum->add_option("--grid", spec_grid, "grid size for a single-sector query");
    spectrum->callback([&] {
        SphereParams p{spec_f.n, spec_f.alpha, spec_f.s};
        if (spec_f.format == "csv")
            throw CLI::ValidationError("spectrum", "spectrum emits JSON only");
        if (spec_ell >= 0) {
            const double value = sector_gap(p, spec_ell, spec_grid);
            emit_json(spec_f.out,
                      envelope("spectrum",
                               {{"params", params_json(p)}, {"ell", spec_ell}, {"grid", spec_grid}},
                               json{{"sector_gap", value}}));
            return;
        }
        const SpectralResult res = spectral_gap(p, !spec_no_audit);
        const BoundsReport report = verify_bounds(p, &res);
        emit_json(spec_f.out,
                  envelope("spectrum", {{"params", params_json(p)}, {"audit", !spec_no_audit}},
                           json{{"spectral", res},
                                {"bounds", report.checks},
                                {"all_bounds_ok", report.all_ok}}));
        if (!report.all_ok) exit_code = kExitTheoremViolation;
    });

    // ---- alpha-scan --------------------------------------------------------
    CommonFlags scan_f;
    std::vector<double> scan_alphas;
    auto* scan = app.add_subcommand("alpha-scan",
        "gap vs alpha (csv: alpha,s,lambda,sector,rho,lower_bound_cor14,bmz_low,bmz_high)");
    scan->add_option("--n", scan_f.n, "sphere dimension")->required();
    scan->add_option("--s", scan_f.s, "pole distance");
    scan->add_option("--alpha", scan_alphas, "alpha values (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    scan->add_option("--out", scan_f.out.path, "output path");
    scan->add_option("--format", scan_f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    scan->callback([&] {
        const auto rows = alpha_scan(scan_f.n, scan_f.s, scan_alphas);
        if (scan_f.format == "csv") {
            std::vector<std::vector<double>> csv_rows;
            for (const auto& r : rows)
                csv_rows.push_back({r.alpha, r.s, r.lambda, static_cast<double>(r.sector), r.rho,
                                    r.lower_bound_cor14, r.bmz_low, r.bmz_high});
            emit_csv(scan_f.out, "alpha,s,lambda,sector,rho,lower_bound_cor14,bmz_low,bmz_high",
                     csv_rows);
        } else {
            emit_json(scan_f.out,
                      envelope("alpha-scan",
                               {{"n", scan_f.n}, {"s", scan_f.s}, {"alphas", scan_alphas}},
                               json{{"rows", rows}}));
        }
    });

    // ---- profile -----------------------------------------------------------
    CommonFlags prof_f;
    std::size_t prof_grid = 101;
    double prof_tmax = 0.0;  // 0 = auto (3 / sqrt(delta))
    auto* profile_cmd = app.add_subcommand("profile", "model density phi and CDF Phi (csv: t,phi,Phi)");
    add_param_flags(profile_cmd, prof_f, true, false);
    profile_cmd->add_option("--grid", prof_grid, "number of t samples");
    profile_cmd->add_option("--tmax", prof_tmax, "half-width of the t grid (0 = auto)");
    profile_cmd->callback([&] {
        SphereParams p{prof_f.n, prof_f.alpha, 0.0};
        ModelProfile prof(p);
        const double tmax = prof_tmax > 0.0 ? prof_tmax : 3.0 / std::sqrt(prof.delta());
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < prof_grid; ++i) {
            const double t =
                -tmax + 2.0 * tmax * static_cast<double>(i) / static_cast<double>(prof_grid - 1);
            rows.push_back({t, prof.phi(t), prof.Phi(t)});
        }
        if (prof_f.format == "csv") {
            emit_csv(prof_f.out, "t,phi,Phi", rows);
        } else {
            json result{{"rho", prof.rho()},
                        {"delta", prof.delta()},
                        {"c_norm", prof.c_norm()},
                        {"cheeger_lower", prof.cheeger_lower()},
                        {"rows", rows}};
            emit_json(prof_f.out, envelope("profile", {{"params", params_json(p)}, {"tmax", tmax}},
                                           result));
        }
    });

    // ---- tail --------------------------------------------------------------
    CommonFlags tail_f;
    std::size_t tail_grid = 50;
    double tail_rmax = kPi;
    double tail_c = 0.0, tail_C = 0.0;
    auto* tail_cmd =
        app.add_subcommand("tail", "model tail bound int_r^inf phi (csv: r,tail_bound[,two_level])");
    add_param_flags(tail_cmd, tail_f, true, false);
    tail_cmd->add_option("--grid", tail_grid, "number of r samples");
    tail_cmd->add_option("--rmax", tail_rmax, "largest r");
    auto* opt_c = tail_cmd->add_option(
        "--two-level-c", tail_c, "rate constant c for the two-level overlay column");
    auto* opt_C = tail_cmd->add_option(
        "--two-level-C", tail_C, "prefactor C for the two-level overlay column");
    opt_c->needs(opt_C);
    opt_C->needs(opt_c);
    tail_cmd->callback([&] {
        SphereParams p{tail_f.n, tail_f.alpha, 0.0};
        ModelProfile prof(p);
        const bool overlay = tail_c > 0.0 && tail_C > 0.0;
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < tail_grid; ++i) {
            const double r = tail_rmax * static_cast<double>(i) / static_cast<double>(tail_grid - 1);
            std::vector<double> row{r, prof.tail_bound(r)};
            if (overlay) row.push_back(prof.two_level_overlay(r, tail_c, tail_C));
            rows.push_back(std::move(row));
        }
        if (tail_f.format == "csv") {
            emit_csv(tail_f.out, overlay ? "r,tail_bound,two_level" : "r,tail_bound", rows);
        } else {
            json config{{"params", params_json(p)}, {"rmax", tail_rmax}};
            if (overlay) {
                config["two_level_c"] = tail_c;
                config["two_level_C"] = tail_C;
            }
            emit_json(tail_f.out, envelope("tail", config, json{{"rows", rows}}));
        }
    });

    // ---- isop-check --------------------------------------------------------
    CommonFlags isop_f;
    std::size_t isop_grid = 200;
    auto* isop = app.add_subcommand("isop-check",
        "verify cap isoperimetry (csv: theta0,v,boundary_measure,lower_bound,slack)");
    add_param_flags(isop, isop_f, true, true, /*with_tol=*/true);
    isop->add_option("--grid", isop_grid, "number of theta0 grid points");
    isop->callback([&] {
        SphereParams p{isop_f.n, isop_f.alpha, isop_f.s};
        const Tolerances tol = parse_tolerances(isop_f.tol_kv);
        const CapCheckReport report = isop_check_caps(p, isop_grid, tol.quad);
        if (isop_f.format == "csv") {
            std::vector<std::vector<double>> rows;
            for (const auto& r : report.rows)
                rows.push_back({r.theta0, r.v, r.boundary_measure, r.lower_bound, r.slack});
            emit_csv(isop_f.out, "theta0,v,boundary_measure,lower_bound,slack", rows);
        } else {
            emit_json(isop_f.out,
                      envelope("isop-check", {{"params", params_json(p)}, {"grid", isop_grid}},
                               json{{"rows", report.rows},
                                    {"worst_slack", report.worst_slack},
                                    {"worst_theta0", report.worst_theta0},
                                    {"ok", report.ok}}));
        }
        if (!report.ok) exit_code = kExitTheoremViolation;
    });

    // ---- sample ------------------------------------------------------------
    CommonFlags sample_f;
    std::size_t sample_count = 1000;
    std::uint64_t sample_seed = 0;
    bool sample_points = false;
    sample_f.format = "csv";
    auto* sample = app.add_subcommand("sample",
        "inverse-CDF sampling (csv: theta column; bin: CDSP header + f64 LE)");
    sample->add_option("--n", sample_f.n, "sphere dimension")->required();
    sample->add_option("--alpha", sample_f.alpha, "exponent alpha");
    sample->add_option("--s", sample_f.s, "pole distance");
    sample->add_option("--count", sample_count, "number of draws")->required();
    sample->add_option("--seed", sample_seed, "RNG seed");
    sample->add_flag("--points", sample_points, "also materialize points on S^n (json only)");
    sample->add_option("--out", sample_f.out.path, "output path");
    sample->add_option("--format", sample_f.format, "csv, bin, or json")
        ->check(CLI::IsMember({"csv", "bin", "json"}));
    sample->add_option("--tol", sample_f.tol_kv, "tolerance override, name=value (quad, quantile)");
    sample->callback([&] {
        SphereParams p{sample_f.n, sample_f.alpha, sample_f.s};
        const Tolerances tol = parse_tolerances(sample_f.tol_kv);
        const MarginalDensity md(p, tol.quad);
        const SampleBatch batch =
            sample_direct(md, sample_count, sample_seed, sample_points, tol.quantile);
        std::unique_ptr<std::ofstream> holder;
        if (sample_f.format == "csv") {
            write_theta_csv(batch, sample_f.out.open(holder));
        } else if (sample_f.format == "bin") {
            write_theta_binary(batch, sample_f.out.open(holder, /*binary=*/true));
        } else {
            json result{{"thetas", batch.thetas}};
            if (sample_points) result["points"] = batch.points;
            emit_json(sample_f.out, envelope("sample",
                                             {{"params", params_json(p)},
                                              {"count", sample_count},
                                              {"seed", sample_seed},
                                              {"points", sample_points}},
                                             result));
        }
    });

    // ---- bm-sample ---------------------------------------------------------
    CommonFlags bm_f;
    std::size_t bm_count = 1000;
    std::uint64_t bm_seed = 0;
    double bm_eps = 1e-6;
    bm_f.format = "csv";
    auto* bm = app.add_subcommand("bm-sample",
                                  "walk-on-spheres sampling of the Brownian hitting distribution\n"
                                  "(csv: theta column; bin: CDSP header + f64 LE)");
    bm->add_option("--n", bm_f.n, "sphere dimension")->required();
    bm->add_option("--s", bm_f.s, "start distance |x| from the center");
    bm->add_option("--eps", bm_eps, "stopping distance to the boundary");
    bm->add_option("--count", bm_count, "number of draws")->required();
    bm->add_option("--seed", bm_seed, "RNG seed");
    bm->add_option("--out", bm_f.out.path, "output path");
    bm->add_option("--format", bm_f.format, "csv, bin, or json")
        ->check(CLI::IsMember({"csv", "bin", "json"}));
    bm->callback([&] {
        std::vector<double> x(static_cast<std::size_t>(bm_f.n) + 1, 0.0);
        x[0] = bm_f.s;
        const SampleBatch batch = walk_on_spheres(bm_f.n, x, bm_eps, bm_seed, bm_count);
        std::unique_ptr<std::ofstream> holder;
        if (bm_f.format == "csv") {
            write_theta_csv(batch, bm_f.out.open(holder));
        } else if (bm_f.format == "bin") {
            write_theta_binary(batch, bm_f.out.open(holder, /*binary=*/true));
        } else {
            emit_json(bm_f.out, envelope("bm-sample",
                                         {{"n", bm_f.n},
                                          {"s", bm_f.s},
                                          {"eps", bm_eps},
                                          {"count", bm_count},
                                          {"seed", bm_seed}},
                                         json{{"thetas", batch.thetas}}));
        }
    });

    // ---- ks ----------------------------------------------------------------
    CommonFlags ks_f;
    std::size_t ks_count = 20000;
    std::uint64_t ks_seed = 0;
    double ks_eps = 1e-6;
    auto* ks = app.add_subcommand(
        "ks", "two-sample KS: walk-on-spheres vs inverse-CDF of the harmonic member");
    ks->add_option("--n", ks_f.n, "sphere dimension")->required();
    ks->add_option("--s", ks_f.s, "pole distance");
    ks->add_option("--alpha", ks_f.alpha, "alpha for the inverse-CDF side (default 1)");
    ks->add_option("--count", ks_count, "samples per side");
    ks->add_option("--seed", ks_seed, "base seed (direct uses seed, wos uses seed+1)");
    ks->add_option("--eps", ks_eps, "walk-on-spheres stopping distance");
    ks->add_option("--out", ks_f.out.path, "output path");
    ks->callback([&] {
        SphereParams p{ks_f.n, ks_f.alpha, ks_f.s};
        const SampleBatch direct = sample_direct(p, ks_count, ks_seed);
        std::vector<double> x(static_cast<std::size_t>(ks_f.n) + 1, 0.0);
        x[0] = ks_f.s;
        const SampleBatch wos = walk_on_spheres(ks_f.n, x, ks_eps, ks_seed + 1, ks_count);
        const KsResult result = ks_two_sample(direct, wos);
        emit_json(ks_f.out, envelope("ks",
                                     {{"params", params_json(p)},
                                      {"count", ks_count},
                                      {"seed", ks_seed},
                                      {"eps", ks_eps}},
                                     json(result)));
    });

    // ---- concentration -----------------------------------------------------
    CommonFlags conc_f;
    std::size_t conc_count = 10000, conc_grid = 20;
    std::uint64_t conc_seed = 0;
    double conc_rmax = 2.0;
    auto* conc = app.add_subcommand("concentration",
                                    "exact vs model tails for the half-mass cap enlargement\n"
                                    "(csv: r,exact,empirical,model_tail)");
    add_param_flags(conc, conc_f, true, true, /*with_tol=*/true);
    conc->add_option("--count", conc_count, "Monte-Carlo sample count");
    conc->add_option("--seed", conc_seed, "RNG seed");
    conc->add_option("--grid", conc_grid, "number of r values");
    conc->add_option("--rmax", conc_rmax, "largest enlargement radius");
    conc->callback([&] {
        SphereParams p{conc_f.n, conc_f.alpha, conc_f.s};
        const Tolerances tol = parse_tolerances(conc_f.tol_kv);
        std::vector<double> r_grid;
        for (std::size_t i = 1; i <= conc_grid; ++i)
            r_grid.push_back(conc_rmax * static_cast<double>(i) / static_cast<double>(conc_grid));
        const ConcentrationReport report =
            concentration_experiment(p, r_grid, conc_count, conc_seed, tol.quad);
        if (conc_f.format == "csv") {
            std::vector<std::vector<double>> rows;
            for (const auto& r : report.rows)
                rows.push_back({r.r, r.exact, r.empirical, r.model_tail});
            emit_csv(conc_f.out, "r,exact,empirical,model_tail", rows);
        } else {
            emit_json(conc_f.out, envelope("concentration",
                                           {{"params", params_json(p)},
                                            {"count", conc_count},
                                            {"seed", conc_seed},
                                            {"rmax", conc_rmax}},
                                           json{{"median", report.median},
                                                {"rows", report.rows},
                                                {"ok", report.all_ok}}));
        }
        if (!report.all_ok) exit_code = kExitTheoremViolation;
    });

    // ---- norm-check --------------------------------------------------------
    CommonFlags norm_f;
    std::string norm_kind = "euclidean";
    std::vector<double> norm_axes;
    std::size_t norm_samples = 10000;
    std::uint64_t norm_seed = 0;
    double norm_h = 1e-4;
    auto* norm_cmd = app.add_subcommand("norm-check",
                                        "epsilon-condition for a general norm replacing |.|");
    norm_cmd->add_option("--n", norm_f.n, "sphere dimension")->required();
    norm_cmd->add_option("--alpha", norm_f.alpha, "alpha for the implied certificate");
    norm_cmd->add_option("--norm", norm_kind, "euclidean or ellipsoid")
        ->check(CLI::IsMember({"euclidean", "ellipsoid"}));
    norm_cmd->add_option("--axes", norm_axes, "ellipsoid diagonal (n+1 values, comma-separated)")
        ->delimiter(',');
    norm_cmd->add_option("--count", norm_samples, "number of sampled (y, theta) pairs");
    norm_cmd->add_option("--seed", norm_seed, "RNG seed");
    norm_cmd->add_option("--fd-step", norm_h, "finite-difference step");
    norm_cmd->add_option("--out", norm_f.out.path, "output path");
    norm_cmd->callback([&] {
        const std::size_t dim = static_cast<std::size_t>(norm_f.n) + 1;
        NormSpec norm;
        norm.fd_step = norm_h;
        if (norm_kind == "euclidean") {
            norm.evaluate = [](std::span<const double> y) {
                double q = 0.0;
                for (double c : y) q += c * c;
                return std::sqrt(q);
            };
        } else {
            if (norm_axes.size() != dim)
                throw CLI::ValidationError("norm-check", "--axes needs exactly n+1 values");
            std::vector<double> diag = norm_axes;
            norm.evaluate = [diag](std::span<const double> y) {
                double q = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i) q += diag[i] * y[i] * y[i];
                return std::sqrt(q);
            };
        }
        const NormEpsilonResult res = norm_epsilon(norm, norm_f.n, norm_samples, norm_h, norm_seed);
        const auto range = admissible_alpha_range(res.epsilon, norm_f.n);
        json result{{"epsilon", res.epsilon},
                    {"witness_y", res.witness_y},
                    {"witness_theta", res.witness_theta},
                    {"implied_rho", implied_rho(res.epsilon, norm_f.n, norm_f.alpha)},
                    {"implied_N", -norm_f.alpha},
                    {"alpha_admissible_low", range.first},
                    {"alpha_admissible_high",
                     std::isfinite(range.second) ? json(range.second) : json()}};
        emit_json(norm_f.out, envelope("norm-check",
                                       {{"n", norm_f.n},
                                        {"alpha", norm_f.alpha},
                                        {"norm", norm_kind},
                                        {"axes", norm_axes},
                                        {"count", norm_samples},
                                        {"seed", norm_seed},
                                        {"h", norm_h}},
                                       result));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const CertificationError& e) {
        std::cerr << "theorem check failed: " << e.what() << '\n';
        return kExitTheoremViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return exit_code;
}
