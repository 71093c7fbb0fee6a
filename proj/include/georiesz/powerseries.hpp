#ifndef GEORIESZ_POWERSERIES_HPP
#define GEORIESZ_POWERSERIES_HPP

#include <vector>

#include "georiesz/potential.hpp"
#include "georiesz/sphere.hpp"

namespace georiesz {

/// Truncated Maclaurin series: coefficients c[k] of t^k, k = 0..K.
/// Addition and truncated multiplication are exact on the retained
/// coefficients given exact inputs.
struct PowerSeries {
    std::vector<double> c;

    PowerSeries() = default;
    explicit PowerSeries(int truncation) : c(static_cast<std::size_t>(truncation) + 1, 0.0) {}

    int truncation() const { return static_cast<int>(c.size()) - 1; }
    double operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
    double& operator[](int k) { return c[static_cast<std::size_t>(k)]; }

    PowerSeries& add_scaled(const PowerSeries& other, double factor);
    PowerSeries multiply_truncated(const PowerSeries& other, int truncation) const;
    double evaluate(double t) const; // Horner
};

/// Odd series A(t) with arccos t = pi/2 - A(t):
/// coefficient of t^{2n+1} is binom(2n,n) / (4^n (2n+1)), all positive,
/// computed in log space; even coefficients are zero.
PowerSeries arccos_series(int truncation);

/// Maclaurin coefficients of the regularized potential
///   (eps + arccos t)^delta          (geodesic power, delta != 0)
///   log(pi / (eps + arccos t))      (logarithmic)
/// obtained by composing the outer binomial/log series with
/// u = 2 A(t)/(pi + 2 eps); since u has no constant term the composition is
/// coefficient-exact at outer order K.
PowerSeries potential_series(const PotentialSpec& spec, int truncation);

/// Same coefficients through the first-order relation G y' = delta G' y
/// (resp. G y' = -G' for the log kind) as a convolution recurrence, O(K^2)
/// instead of the O(K^3) composition; the two routes agree coefficient-wise.
PowerSeries potential_series_ode(const PotentialSpec& spec, int truncation);

/// Closed Gamma-function form of moment_integral (identical value, O(1)).
double moment_integral_closed(int k, int n, const SphereContext& ctx);

/// Weighted moment int_{-1}^1 t^k C_n^lambda(t) w_lambda(t) dt by a Gauss
/// rule with enough nodes to be exact; for d = 1 the Chebyshev analogue
/// (C -> T).  Zero unless k >= n with k - n even; positive in that case.
double moment_integral(int k, int n, const SphereContext& ctx);

struct SeriesCoefficient {
    double value = 0.0;      // Gegenbauer coefficient F^(n; lambda), series route
    double tail_bound = 0.0; // certified bound on the dropped k > K terms
};

/// Independent series-route oracle for the Gegenbauer coefficient:
/// sum_k a_k(eps) * moment_integral(k, n), normalized identically to the
/// quadrature route.  Throws if the measured tail cannot be certified below
/// the partial sum.
SeriesCoefficient coefficient_via_series(const PotentialSpec& spec, int n,
                                         const SphereContext& ctx, int truncation);

} // namespace georiesz

#endif
