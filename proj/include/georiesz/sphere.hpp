#ifndef GEORIESZ_SPHERE_HPP
#define GEORIESZ_SPHERE_HPP

#include <cmath>
#include <span>
#include <stdexcept>

namespace georiesz {

/// Dimension bundle for the sphere S^d embedded in R^{d+1}.
///
/// The ultraspherical index lambda = (d-1)/2 is derived, never set
/// independently; lambda == 0 exactly on the circle (d = 1), and that case is
/// handled by explicit Chebyshev branches throughout, not as a limit of the
/// lambda-recurrences.
struct SphereContext {
    int d;
    double lambda;

    explicit SphereContext(int dim) : d(dim), lambda(0.5 * (dim - 1)) {
        if (dim < 1)
            throw std::domain_error("SphereContext: dimension must be >= 1");
    }

    int ambient_dim() const { return d + 1; }
    bool is_circle() const { return d == 1; }
};

inline double clamp_to_unit(double t) {
    return t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t);
}

/// Great-circle distance between unit vectors.  arccos(x.y) is used away
/// from the endpoints; within |x.y| > 0.99 the chord/co-chord form
/// 2 atan2(|x-y|, |x+y|) takes over, which stays fully accurate at 0 and pi
/// (arccos alone loses half the digits there).
inline double geodesic_distance_ptr(const double* x, const double* y, int dim) {
    double dot = 0.0;
    for (int k = 0; k < dim; ++k)
        dot += x[k] * y[k];
    if (std::abs(dot) < 0.99)
        return std::acos(dot);
    double chord2 = 0.0, cochord2 = 0.0;
    for (int k = 0; k < dim; ++k) {
        double d = x[k] - y[k];
        double s = x[k] + y[k];
        chord2 += d * d;
        cochord2 += s * s;
    }
    return 2.0 * std::atan2(std::sqrt(chord2), std::sqrt(cochord2));
}

inline double geodesic_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("geodesic_distance: dimension mismatch");
    return geodesic_distance_ptr(x.data(), y.data(), static_cast<int>(x.size()));
}

} // namespace georiesz

#endif
