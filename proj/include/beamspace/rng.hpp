#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace beamspace {

namespace detail {

/// SplitMix64 output function, used to mix seed material into stream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-seeded random stream. Uniform and Gaussian draws are generated
/// from the raw 64-bit engine output, so sequences depend only on the seed
/// material and not on the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; one spare value is cached.
    double standard_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Circularly-symmetric complex Gaussian with E|x|^2 = variance
    /// (real and imaginary parts independent N(0, variance/2)).
    std::complex<double> complex_gaussian(double variance) {
        const double s = std::sqrt(variance * 0.5);
        const double re = s * standard_normal();
        const double im = s * standard_normal();
        return {re, im};
    }

    /// Equiprobable +1/-1.
    int sign() { return (engine_() >> 63) ? 1 : -1; }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derives an independent substream from a base seed and a key path such as
/// {sweep_index, trial, purpose}. Streams for distinct paths are decorrelated,
/// which keeps Monte Carlo trials invariant to execution order.
inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = seed;
    std::uint64_t acc = detail::splitmix64(state);
    for (std::uint64_t key : path) {
        state = acc ^ (key + 0x9e3779b97f4a7c15ULL + (acc << 12) + (acc >> 4));
        acc = detail::splitmix64(state);
    }
    return Rng(acc);
}

} // namespace beamspace
