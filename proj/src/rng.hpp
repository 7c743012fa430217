#ifndef VSEL_RNG_HPP
#define VSEL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace vsel {

// Counter-style generator built on splitmix64.  Streams are derived from
// (seed, index) so per-particle and per-packet draws are identical no matter
// how the work is partitioned across threads, and identical across platforms
// (std::normal_distribution is implementation-defined, so it is avoided).
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        state_ = seed ^ (0x9E3779B97F4A7C15ull * (stream + 1));
        // decorrelate nearby streams
        next();
        next();
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1]
    double uniform() {
        return (next() >> 11) * (1.0 / 9007199254740992.0) + 0x1p-53;
    }

    // standard normal pair, Box-Muller
    void normal_pair(double& a, double& b) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2.0 * M_PI * u2);
        b = r * std::sin(2.0 * M_PI * u2);
    }

    double normal() {
        double a, b;
        normal_pair(a, b);
        return a;
    }

  private:
    std::uint64_t state_;
};

} // namespace vsel

#endif
