#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace xorgames {

// Counter-based pseudo-random stream. Each consumer derives its own stream
// from a (seed, unit, role, index) key, so loop iterations can run in any
// order (or in parallel) and still draw identical values.
//
// The generator is SplitMix64 evaluated at key + counter; statistically solid
// for Monte Carlo use and bit-stable across platforms.

namespace rngdetail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace rngdetail

// Stream roles, kept distinct so no two consumers share a key.
enum class StreamRole : std::uint64_t {
    simulate = 1,
    sdp_restart = 2,
    projection = 3,
    twist = 4,
    generic = 5,
};

class RandomStream {
  public:
    RandomStream(std::int64_t seed, std::uint64_t unit, StreamRole role,
                 std::uint64_t index = 0) {
        using rngdetail::mix64;
        std::uint64_t k = mix64(static_cast<std::uint64_t>(seed));
        k = mix64(k ^ (0x100000001b3ULL * unit));
        k = mix64(k ^ (0xc2b2ae3d27d4eb4fULL * static_cast<std::uint64_t>(role)));
        k = mix64(k ^ (0x165667b19e3779f9ULL * index));
        key_ = k;
    }

    std::uint64_t next_u64() { return rngdetail::mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform on the open interval (0, 1); 53-bit resolution, endpoints excluded.
    double next_open01() {
        for (;;) {
            double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
            if (u > 0.0 && u < 1.0) return u;
        }
    }

    // Uniform on [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller.
    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_open01();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform over {1, -1, i, -i}.
    std::complex<double> next_quaternary() {
        switch (next_u64() & 3u) {
            case 0: return {1.0, 0.0};
            case 1: return {-1.0, 0.0};
            case 2: return {0.0, 1.0};
            default: return {0.0, -1.0};
        }
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace xorgames
