#ifndef GEORIESZ_SPECFUN_HPP
#define GEORIESZ_SPECFUN_HPP

#include <vector>

#include "georiesz/sphere.hpp"

namespace georiesz {

/// Gegenbauer (ultraspherical) polynomial C_n^lambda(t) by the three-term
/// recurrence; for lambda == 0 returns the Chebyshev polynomial T_n(t)
/// evaluated as cos(n arccos t).
double gegenbauer_eval(int n, double lambda, double t);

/// Value at the right endpoint, C_n^lambda(1) = Gamma(n+2l)/(Gamma(2l) n!)
/// for lambda > 0; equals 1 for lambda == 0 (Chebyshev convention).
double gegenbauer_at_one(int n, double lambda);

/// Normalized polynomial R_n^lambda(t) = C_n^lambda(t)/C_n^lambda(1), so
/// R_n^lambda(1) = 1 and |R_n^lambda| <= 1 on [-1,1].  For d = 1 this is
/// T_n(t) directly.
double gegenbauer_normalized(int n, const SphereContext& ctx, double t);
double gegenbauer_normalized(int n, double lambda, double t);

/// Fills out[0..K] with R_k^lambda(t) for k = 0..K in one recurrence pass.
void gegenbauer_normalized_all(int K, double lambda, double t, std::span<double> out);

/// Derivative of the normalized polynomial,
///   (R_n^lambda)'(t) = n(n+2*lambda)/(2*lambda+1) R_{n-1}^{lambda+1}(t),
/// valid for lambda >= 0 (at lambda = 0 it reduces to T_n' = n U_{n-1}).
double gegenbauer_normalized_derivative(int n, double lambda, double t);

/// Dimension of the space of degree-n spherical harmonics on S^d.  Exact
/// integer value (returned as double; exact whenever it fits in 53 bits):
/// 1 for n = 0, 2 for d = 1 and n >= 1, and
/// binom(n+d, d) - binom(n+d-2, d) otherwise.
double harmonic_dim(int n, const SphereContext& ctx);

/// Reproducing kernel of the degree-n harmonics evaluated at inner product t:
/// (n+lambda)/lambda * C_n^lambda(t) for d >= 2, and 1 (n = 0) or 2 T_n(t)
/// (n >= 1) on the circle.  zonal_eval(n, ctx, 1) == harmonic_dim(n, ctx).
double zonal_eval(int n, const SphereContext& ctx, double t);

/// Connection coefficient linking weight classes lambda -> mu,
///   (sin th)^{2l} R_n^l(cos th) = sum_k alpha_{k,n} R_{n+2k}^m(cos th) (sin th)^{2m},
/// computed in log space.  Requires 0 < lambda < mu < 2*lambda + 1; the
/// coefficient is strictly positive on that domain.
double gegenbauer_connection(int k, int n, double lambda, double mu);

/// Partial sum of the connection expansion above, k = 0..K.  Used to verify
/// the reconstruction residual.
double gegenbauer_connection_sum(int n, double lambda, double mu, double theta, int K);

/// Cesaro mean coefficient ratio A_{n-k}^{order}/A_n^{order} with
/// A_j^s = Gamma(j+s+1)/(Gamma(j+1) Gamma(s+1)), in log space.
double cesaro_ratio(int n, int k, double order);

/// Cesaro kernel of order d+1 for spherical harmonic expansions on S^d:
///   K_n(t) = sum_{k=0}^n A_{n-k}^{d+1}/A_n^{d+1} * zonal_eval(k, ctx, t),
/// nonnegative on [-1, 1].
double cesaro_kernel(int n, const SphereContext& ctx, double t);

} // namespace georiesz

#endif
