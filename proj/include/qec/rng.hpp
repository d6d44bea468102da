#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG stream derived from (seed, stream). std::mt19937_64 is
// fully specified by the standard; uniform/normal variates are generated
// explicitly below because the std distributions are implementation-defined
// and would break byte-identical reruns across toolchains.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        (void)splitmix64(s);
        s ^= 0xd1b54a32d192ed03ULL * (stream + 1);
        engine_.seed(splitmix64(s));
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; caches the second variate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is biased for huge n; all our n are tiny.
        return bits() % n;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qec
