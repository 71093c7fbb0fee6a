#ifndef GEORIESZ_RNG_HPP
#define GEORIESZ_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace georiesz {

/// Deterministic random source: mt19937_64 with explicit uniform/gaussian
/// transforms so streams are reproducible across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    /// Uniform point on S^d as d+1 coordinates (normalized gaussians).
    std::vector<double> unit_vector(int d) {
        std::vector<double> x(static_cast<std::size_t>(d) + 1);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& xi : x) {
                xi = gaussian();
                norm2 += xi * xi;
            }
        } while (norm2 < 1e-200);
        double inv = 1.0 / std::sqrt(norm2);
        for (double& xi : x)
            xi *= inv;
        return x;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace georiesz

#endif
