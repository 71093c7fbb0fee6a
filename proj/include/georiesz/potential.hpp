#ifndef GEORIESZ_POTENTIAL_HPP
#define GEORIESZ_POTENTIAL_HPP

#include <vector>

#include "georiesz/sphere.hpp"

namespace georiesz {

/// Which potential F the energy and coefficient machinery works on.  The
/// single home of delta and the regularization epsilon.
///
///   geodesic_power:  F(t) = (eps + arccos t)^delta, delta != 0
///   logarithmic:     F(t) = log(pi / (eps + arccos t))   (the delta = 0 case)
///   cap_indicator:   F(t) = 1 for t >= cap_height, else 0
///   spectral_table:  F(t) = sum_n table[n] * zonal_eval(n, ctx, t)
struct PotentialSpec {
    enum class Kind { GeodesicPower, Logarithmic, CapIndicator, SpectralTable };

    Kind kind = Kind::GeodesicPower;
    double delta = 0.0;
    double epsilon = 0.0;
    double cap_height = 0.0;
    std::vector<double> table;

    static PotentialSpec geodesic(double delta, double epsilon = 0.0);
    static PotentialSpec logarithmic(double epsilon = 0.0);
    static PotentialSpec cap(double height);
    static PotentialSpec spectral(std::vector<double> coefficients);

    /// Throws std::domain_error on parameter violations; with a context,
    /// additionally enforces integrability (delta > -d for geodesic kind).
    void validate() const;
    void validate(const SphereContext& ctx) const;

    /// F as a function of the inner product t in [-1, 1].
    double value(double t, const SphereContext& ctx) const;

    /// F as a function of the geodesic angle theta = arccos t in [0, pi].
    double value_theta(double theta, const SphereContext& ctx) const;

    bool is_geodesic() const { return kind == Kind::GeodesicPower; }
    bool is_log() const { return kind == Kind::Logarithmic; }

    /// True when F(1) is finite (diagonal terms of discrete measures are
    /// admissible): geodesic with delta > 0 or eps > 0, log with eps > 0,
    /// cap and spectral always.
    bool finite_at_one() const;
};

} // namespace georiesz

#endif
