// Seeded Monte-Carlo machinery.
//
// Two independent routes to the same distributions: direct inverse-CDF
// sampling of the angular marginal, and walk-on-spheres simulation of the
// Brownian hitting distribution (which matches the alpha = 1 member of the
// family; the agreement of the two samplers is the key cross-validation).
// Batches are bit-for-bit reproducible from (params, seed, count, method):
// every batch owns one RngStream and no global state exists.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cdsphere/errors.hpp"
#include "cdsphere/measures.hpp"
#include "cdsphere/profiles.hpp"
#include "cdsphere/rng.hpp"

namespace cdsphere {

enum class SampleMethod { inverse_cdf, walk_on_spheres };

struct SampleBatch {
    SphereParams params;
    std::vector<double> thetas;
    std::vector<double> points;  // optional; flat row-major, point_dim per row
    std::size_t point_dim = 0;
    std::uint64_t seed = 0;
    SampleMethod method = SampleMethod::inverse_cdf;

    std::size_t size() const { return thetas.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * point_dim, point_dim};
    }
};

namespace detail {

// Health check run on ~1% of every materialized batch: points must be unit
// vectors whose axis angle matches the recorded theta.
inline void spot_check_batch(const SampleBatch& batch, std::span<const double> axis) {
    if (batch.points.empty()) return;
    const std::size_t stride = std::max<std::size_t>(1, batch.size() / 100);
    for (std::size_t i = 0; i < batch.size(); i += stride) {
        const auto pt = batch.point(i);
        double norm2 = 0.0, dot = 0.0;
        for (std::size_t j = 0; j < pt.size(); ++j) {
            norm2 += pt[j] * pt[j];
            dot += pt[j] * axis[j];
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
            throw SamplingError("sample batch invariant violated: point off the sphere");
        if (std::abs(std::acos(std::clamp(dot, -1.0, 1.0)) - batch.thetas[i]) > 1e-10)
            throw SamplingError("sample batch invariant violated: theta mismatch");
    }
}

}  // namespace detail

/// Draws theta_i = quantile(u_i) from the angular marginal; optionally lifts
/// each angle to S^n by attaching a uniform direction orthogonal to the axis
/// (the axis is the first coordinate by convention). All angles are drawn
/// before any lift directions, so thetas do not depend on with_points.
inline SampleBatch sample_direct(const MarginalDensity& marginal, std::size_t count,
                                 std::uint64_t seed, bool with_points = false,
                                 double quantile_tol = 1e-10) {
    if (count < 1) throw std::invalid_argument("sample_direct: count must be >= 1");
    SampleBatch batch;
    batch.params = marginal.params();
    batch.seed = seed;
    batch.method = SampleMethod::inverse_cdf;
    batch.thetas.reserve(count);
    RngStream rng(seed, 0);
    for (std::size_t i = 0; i < count; ++i)
        batch.thetas.push_back(marginal.quantile(rng.uniform01(), quantile_tol));
    if (with_points) {
        const std::size_t dim = static_cast<std::size_t>(marginal.params().n) + 1;
        batch.point_dim = dim;
        batch.points.assign(count * dim, 0.0);
        std::vector<double> dir(dim - 1);
        for (std::size_t i = 0; i < count; ++i) {
            rng.unit_vector(dir);
            double* row = batch.points.data() + i * dim;
            row[0] = std::cos(batch.thetas[i]);
            const double sn = std::sin(batch.thetas[i]);
            for (std::size_t j = 0; j + 1 < dim; ++j) row[j + 1] = sn * dir[j];
        }
        std::vector<double> axis(dim, 0.0);
        axis[0] = 1.0;
        detail::spot_check_batch(batch, axis);
    }
    return batch;
}

inline SampleBatch sample_direct(const SphereParams& params, std::size_t count,
                                 std::uint64_t seed, bool with_points = false) {
    return sample_direct(MarginalDensity(params), count, seed, with_points);
}

/// Samples the hitting distribution of S^n by Brownian motion from x (|x|<1):
/// jump to a uniform point on the largest sphere inscribed at the current
/// position until within eps of the boundary, then project radially. The
/// output converges to the harmonic measure (the alpha = 1 member) as
/// eps -> 0; the bias is O(eps). Walks that exceed the iteration cap are
/// rejected; more than 0.1% rejections aborts the batch.
inline SampleBatch walk_on_spheres(int n, std::span<const double> x, double eps,
                                   std::uint64_t seed, std::size_t count) {
    if (n < 2) throw std::invalid_argument("walk_on_spheres: n must be >= 2");
    if (!(eps >= 1e-8 && eps <= 1e-3))
        throw std::invalid_argument("walk_on_spheres: eps must lie in [1e-8, 1e-3]");
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    if (x.size() != dim)
        throw std::invalid_argument("walk_on_spheres: x must have n+1 coordinates");
    double x_norm2 = 0.0;
    for (double c : x) x_norm2 += c * c;
    const double x_norm = std::sqrt(x_norm2);
    if (!(x_norm < 1.0)) throw std::invalid_argument("walk_on_spheres: |x| must be < 1");

    std::vector<double> axis(dim, 0.0);
    if (x_norm > 0.0)
        for (std::size_t i = 0; i < dim; ++i) axis[i] = x[i] / x_norm;
    else
        axis[0] = 1.0;  // convention when starting at the center

    SampleBatch batch;
    batch.params = SphereParams{n, 1.0, x_norm};
    batch.seed = seed;
    batch.method = SampleMethod::walk_on_spheres;
    batch.point_dim = dim;
    batch.thetas.reserve(count);
    batch.points.reserve(count * dim);

    RngStream rng(seed, 0);
    std::vector<double> z(dim), dir(dim);
    constexpr std::size_t kMaxSteps = 100000;
    std::size_t attempts = 0, rejects = 0;
    while (batch.thetas.size() < count) {
        ++attempts;
        std::copy(x.begin(), x.end(), z.begin());
        std::size_t steps = 0;
        bool rejected = false;
        while (true) {
            double r2 = 0.0;
            for (double c : z) r2 += c * c;
            const double dist = 1.0 - std::sqrt(r2);
            if (dist < eps) break;
            if (++steps > kMaxSteps) {
                rejected = true;
                break;
            }
            rng.unit_vector(dir);
            for (std::size_t i = 0; i < dim; ++i) z[i] += dist * dir[i];
        }
        if (rejected) {
            ++rejects;
            if (static_cast<double>(rejects) > 0.001 * static_cast<double>(attempts) + 1.0)
                throw SamplingError("walk_on_spheres: more than 0.1% of walks hit the step cap");
            continue;
        }
        double r = 0.0;
        for (double c : z) r += c * c;
        r = std::sqrt(r);
        double dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            z[i] /= r;
            dot += z[i] * axis[i];
        }
        batch.thetas.push_back(std::acos(std::clamp(dot, -1.0, 1.0)));
        batch.points.insert(batch.points.end(), z.begin(), z.end());
    }
    if (static_cast<double>(rejects) > 0.001 * static_cast<double>(attempts))
        throw SamplingError("walk_on_spheres: more than 0.1% of walks hit the step cap");
    detail::spot_check_batch(batch, axis);
    return batch;
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov–Smirnov test on the theta values, with the
/// asymptotic Kolmogorov distribution p-value.
inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double m = static_cast<double>(sa.size());
    const double k = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / k));
    }
    KsResult out;
    out.statistic = d;
    const double t = std::sqrt(m * k / (m + k)) * d;
    if (t < 1e-3) {
        out.p_value = 1.0;
        return out;
    }
    double q = 0.0;
    for (int term = 1; term <= 100; ++term) {
        const double e = std::exp(-2.0 * term * term * t * t);
        q += (term % 2 == 1 ? 2.0 : -2.0) * e;
        if (e < 1e-18) break;
    }
    out.p_value = std::clamp(q, 0.0, 1.0);
    return out;
}

inline KsResult ks_two_sample(const SampleBatch& a, const SampleBatch& b) {
    return ks_two_sample(std::span<const double>(a.thetas), std::span<const double>(b.thetas));
}

struct ConcentrationRow {
    double r = 0.0;
    double exact = 0.0;      // 1 - cdf(median + r), the true enlargement gap
    double empirical = 0.0;  // Monte-Carlo estimate of the same
    double model_tail = 0.0; // int_r^inf phi
    bool ok = false;         // exact <= model_tail (+ tolerance)
};

struct ConcentrationReport {
    double median = 0.0;
    std::vector<ConcentrationRow> rows;
    bool all_ok = true;
};

/// Takes the half-mass axis cap A = {theta <= median} and compares the exact
/// measure of the complement of its geodesic r-enlargement against the model
/// tail, alongside an empirical estimate from count samples.
inline ConcentrationReport concentration_experiment(const SphereParams& params,
                                                    std::span<const double> r_grid,
                                                    std::size_t count, std::uint64_t seed,
                                                    double quad_tol = 1e-10) {
    const MarginalDensity marginal(params, quad_tol);
    const ModelProfile profile(params);
    ConcentrationReport report;
    report.median = marginal.median();
    const SampleBatch batch = sample_direct(marginal, count, seed, false);
    std::vector<double> sorted = batch.thetas;
    std::sort(sorted.begin(), sorted.end());
    for (double r : r_grid) {
        if (!(r >= 0.0)) throw std::domain_error("concentration_experiment: r must be >= 0");
        ConcentrationRow row;
        row.r = r;
        const double cut = report.median + r;
        row.exact = cut >= kPi ? 0.0 : marginal.cdf_upper(cut);
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), cut);
        row.empirical =
            static_cast<double>(std::distance(it, sorted.end())) / static_cast<double>(count);
        row.model_tail = profile.tail_bound(r);
        row.ok = row.exact <= row.model_tail + 1e-9;
        report.all_ok = report.all_ok && row.ok;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Batch export: CSV (theta column) and binary (16-byte header + f64 LE array)
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

inline void put_u64_le(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

inline std::uint32_t get_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64_le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace detail

inline constexpr std::uint32_t kBatchFormatVersion = 1;

inline void write_theta_csv(const SampleBatch& batch, std::ostream& os) {
    os << "theta\n";
    char buf[32];
    for (double t : batch.thetas) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        os << buf << '\n';
    }
}

inline void write_theta_binary(const SampleBatch& batch, std::ostream& os) {
    os.write("CDSP", 4);
    detail::put_u32_le(os, kBatchFormatVersion);
    detail::put_u64_le(os, static_cast<std::uint64_t>(batch.thetas.size()));
    for (double t : batch.thetas) detail::put_u64_le(os, std::bit_cast<std::uint64_t>(t));
}

inline std::vector<double> read_theta_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "CDSP", 4) != 0)
        throw std::runtime_error("read_theta_binary: bad magic");
    const std::uint32_t version = detail::get_u32_le(is);
    if (version != kBatchFormatVersion)
        throw std::runtime_error("read_theta_binary: unsupported version " +
                                 std::to_string(version));
    const std::uint64_t count = detail::get_u64_le(is);
    if (!is || count > (1ull << 36))
        throw std::runtime_error("read_theta_binary: implausible sample count");
    std::vector<double> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t bits = detail::get_u64_le(is);
        if (!is) throw std::runtime_error("read_theta_binary: truncated payload");
        out.push_back(std::bit_cast<double>(bits));
    }
    return out;
}

}  // namespace cdsphere
