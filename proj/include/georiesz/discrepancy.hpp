#ifndef GEORIESZ_DISCREPANCY_HPP
#define GEORIESZ_DISCREPANCY_HPP

#include <cstdint>

#include "georiesz/coefficients.hpp"
#include "georiesz/energy.hpp"
#include "georiesz/pointsets.hpp"

namespace georiesz {

/// A potential in the positive-definite class together with its coefficient
/// table: geodesic delta in (0, 1] is centered as (pi/2+eps)^delta - F so the
/// degree >= 1 coefficients turn nonnegative; delta < 0 and the log kind
/// require eps > 0 and are positive definite as they stand.
struct PositiveDefinitePotential {
    PotentialSpec base;
    SphereContext ctx;
    bool flipped = false;
    double center = 0.0;
    CoefficientTable table; // coefficients of the centered potential

    double value(double t) const {
        double v = base.value(t, ctx);
        return flipped ? center - v : v;
    }
    double value_at_one() const;
};

PositiveDefinitePotential make_positive_definite(const PotentialSpec& spec,
                                                 const SphereContext& ctx, int K,
                                                 double tol = 1e-12);

struct SpectralDiscrepancy {
    double value = 0.0;      // sum_{k>=1} F^(k) b_k up to the table degree
    double tail_bound = 0.0; // certified bound on the dropped k > K terms
};

/// Spectral L^2 discrepancy of the empirical measure of Z against sigma for
/// a positive-definite table; throws if a degree >= 1 entry is negative
/// beyond its error bar.
SpectralDiscrepancy l2_discrepancy_spectral(const PointSet& z, const CoefficientTable& table);

struct StolarskyReport {
    double lhs = 0.0;              // N^{-2} sum_{i,j} F (diagonal included)
    double d_squared = 0.0;        // spectral discrepancy
    double i_sigma = 0.0;          // I_F(sigma) by quadrature
    double residual = 0.0;         // |lhs - d_squared - i_sigma|
    double truncation_bound = 0.0; // certified spectral tail
    double numerical_slack = 0.0;  // quadrature / roundoff allowance
};

/// Verifies the invariance identity N^{-2} sum F = D^2 + I_F(sigma) with all
/// three terms computed by independent routes.
StolarskyReport stolarsky_check(const PointSet& z, const PotentialSpec& spec,
                                const SphereContext& ctx, int K);

enum class CapMethod { MonteCarlo, Spectral, EuclideanOracle };

struct CapDiscrepancy {
    double value = 0.0;
    double error = 0.0; // standard error (MC) or certified tail (spectral)
};

/// L^2 spherical-cap discrepancy squared of Z.  monte_carlo samples caps
/// B(x, t) directly (d = 2); spectral sums cap_l2_coefficient(n) b_n;
/// euclidean_oracle uses the pairwise-Euclidean-distance form with its
/// constant pinned against monte_carlo once per dimension.
CapDiscrepancy cap_discrepancy(const PointSet& z, const SphereContext& ctx, CapMethod method,
                               std::int64_t budget = 200000, std::uint64_t seed = 1,
                               int max_degree = 2048);

/// int_{-1}^{1} |f^_t(n; lambda)|^2 dt for the cap indicator family; batch
/// version shares one Gauss-Legendre node set across all degrees.
double cap_l2_coefficient(int n, const SphereContext& ctx);
std::vector<double> cap_l2_coefficients(const SphereContext& ctx, int max_degree);

struct BoundsReport {
    double lower_expr = 0.0;   // min_{1<=k<=N^{1/d}} F^(k)
    double upper_expr = 0.0;   // N^{-1} max_{0<=t<=N^{-1/d}} (F(1) - F(cos t))
    double measured = 0.0;     // best D^2 over multi-start optimization
    double ratio_lower = 0.0;  // measured / lower_expr
    double ratio_upper = 0.0;  // upper_expr / measured
    bool ordered = false;
};

/// Evaluates both bound expressions of the discrepancy estimate (with the
/// free constants set to 1) against the best optimizer-found D^2.
BoundsReport discrepancy_bounds_check(const PositiveDefinitePotential& pd, int N,
                                      int optimizer_iterations = 200, std::uint64_t seed = 7);

/// Mean-square separation of the smoothed point-mass field from 1:
///   int |1 - N^{-1} sum_j K_n(x . z_j)|^2 dsigma(x),  n = ceil(a N^{1/d}),
/// by an exact product rule on S^2.
double cesaro_separation(const PointSet& z, const SphereContext& ctx, double a = 2.0);

} // namespace georiesz

#endif
