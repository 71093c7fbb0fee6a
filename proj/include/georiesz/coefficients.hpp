#ifndef GEORIESZ_COEFFICIENTS_HPP
#define GEORIESZ_COEFFICIENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "georiesz/potential.hpp"
#include "georiesz/sphere.hpp"

namespace georiesz {

/// Gegenbauer coefficients F^(n; lambda) of a potential for n = 0..K, with
/// per-entry absolute error estimates.  On the circle the entries follow the
/// cosine-coefficient convention F(cos th) = v_0 + sum_{n>=1} v_n 2 cos(n th),
/// which matches zonal_eval and keeps the Stolarsky identity
/// normalization-consistent across dimensions.
struct CoefficientTable {
    SphereContext ctx;
    PotentialSpec spec;
    std::vector<double> values;
    std::vector<double> abs_err;

    int max_degree() const { return static_cast<int>(values.size()) - 1; }
};

/// Single coefficient by theta-domain quadrature:
///   prefactor * int_0^pi F(cos th) R_n(cos th) sin^{2 lambda} th  d th
/// with prefactor Gamma(lambda+1)/(Gamma(lambda+1/2) Gamma(1/2)); the
/// Chebyshev analogue (1/pi) int F(cos th) cos(n th) d th on the circle.
double gegenbauer_coefficient(const PotentialSpec& spec, int n, const SphereContext& ctx,
                              double* abs_err = nullptr, double tol = 1e-12);

/// Whole table n = 0..K sharing one graded node set (one recurrence pass per
/// node), identical normalization to gegenbauer_coefficient.
CoefficientTable coefficient_table(const PotentialSpec& spec, const SphereContext& ctx, int K,
                                   double tol = 1e-12);

/// Partial-sum reconstruction sum_n values[n] zonal_eval(n, ctx, t).
double table_reconstruct(const CoefficientTable& table, double t);

/// Coefficient of the spherical-cap indicator chi_{[t,1]} for n >= 1 and
/// d >= 2, through the closed form  c_d (1-t^2)^{lambda+1/2} R_{n-1}^{lambda+1}(t)
/// with c_d pinned once per dimension against direct quadrature of the
/// indicator (the two routes are cross-validated for n <= 32 on first use).
double cap_coefficient(double height, int n, const SphereContext& ctx);

struct DecayFit {
    double slope = 0.0;
    double residual = 0.0; // RMS misfit of the log-log line
    int points = 0;
};

/// Least-squares slope of log|F^(n)| against log n over [n_min, n_max],
/// skipping structurally vanishing (parity) entries.
DecayFit decay_exponent(const CoefficientTable& table, int n_min, int n_max);

/// Worst relative Funk-Hecke residual
///   | int F(x.y) Z_n(x.p) dsigma(x) - F^(n) Z_n(y.p) |
/// over `samples` random directions y (d = 2 only; the surface integral is
/// done by an exact-in-phi product rule in y-aligned coordinates).
double funk_hecke_residual(const PotentialSpec& spec, int n, const SphereContext& ctx,
                           std::uint64_t seed, int samples = 5);

/// Columnar text serialization (n, value, abs_err), 17 significant digits.
std::string table_to_text(const CoefficientTable& table);

} // namespace georiesz

#endif
