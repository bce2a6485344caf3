// Seeded random streams with a fixed cross-platform output sequence.
//
// Stream discipline: every Monte-Carlo batch owns exactly one RngStream,
// keyed by (seed, stream_id); nothing in the library touches a global
// generator. The engine is mt19937_64 (its raw 64-bit output sequence is
// pinned by the C++ standard); all distributions below are hand-rolled so
// results do not depend on the standard library's distribution internals.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace cdsphere {

/// SplitMix64 mixing step; used to derive engine seeds from (seed, stream).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed;
        std::uint64_t mixed = splitmix64(s);
        s ^= stream_id * 0xda942042e4dd58b5ull;
        mixed ^= splitmix64(s);
        engine_.seed(mixed);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Marsaglia polar; one spare value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, q;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double g = std::sqrt(-2.0 * std::log(q) / q);
        spare_ = v * g;
        have_spare_ = true;
        return u * g;
    }

    /// Uniform direction on the unit sphere of R^dim (dim = out.size()).
    void unit_vector(std::span<double> out) {
        while (true) {
            double norm2 = 0.0;
            for (double& c : out) {
                c = normal();
                norm2 += c * c;
            }
            if (norm2 > 1e-24) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (double& c : out) c *= inv;
                return;
            }
        }
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cdsphere
