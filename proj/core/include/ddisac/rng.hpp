#pragma once

#include <cmath>
#include <cstdint>

#include "ddisac/common.hpp"

namespace ddisac {

/**
 * Deterministic PRNG (xoshiro256++ seeded through splitmix64).
 *
 * The standard library distributions are implementation-defined, so Gaussian
 * draws go through an explicit Box-Muller transform here. Identical seeds
 * produce identical streams on every platform, which the experiment layer
 * relies on for byte-reproducible outputs.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : has_spare_(false), spare_(0.0) {
        std::uint64_t x = seed;
        for (auto& si : s_) si = splitmix64(x);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Stable derivation of per-trial seeds from (campaign seed, counter).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t x = seed ^ (counter * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
        return splitmix64(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) { return next() % n; }

    bool bit() { return (next() >> 63) != 0; }

    // standard normal via Box-Muller
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = kTwoPi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    // circularly symmetric complex Gaussian with E|z|^2 = variance
    cplx cnormal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
    bool has_spare_;
    double spare_;
};

}  // namespace ddisac
