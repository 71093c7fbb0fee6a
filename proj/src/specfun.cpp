#include "georiesz/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace georiesz {

namespace {

void check_args(int n, double lambda, double t) {
    if (n < 0)
        throw std::domain_error("gegenbauer: degree must be >= 0, got " + std::to_string(n));
    if (lambda < 0.0)
        throw std::domain_error("gegenbauer: lambda must be >= 0, got " + std::to_string(lambda));
    if (std::abs(t) > 1.0)
        throw std::domain_error("gegenbauer: argument |t| <= 1 required, got " + std::to_string(t));
}

double chebyshev_t(int n, double t) { return std::cos(n * std::acos(t)); }

// binom(n+d, d) via the stepwise-integer product; exact in double while the
// intermediate binomials stay below 2^53.
double binom_shifted(int n, int d) {
    if (n < 0)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= d; ++i)
        r = r * (n + i) / i;
    return r;
}

} // namespace

double gegenbauer_eval(int n, double lambda, double t) {
    check_args(n, lambda, t);
    if (lambda == 0.0)
        return chebyshev_t(n, t);
    if (n == 0)
        return 1.0;
    double cm1 = 1.0;
    double c = 2.0 * lambda * t;
    for (int k = 2; k <= n; ++k) {
        double next = (2.0 * (k + lambda - 1.0) * t * c - (k + 2.0 * lambda - 2.0) * cm1) / k;
        cm1 = c;
        c = next;
    }
    return c;
}

double gegenbauer_at_one(int n, double lambda) {
    if (lambda == 0.0)
        return 1.0;
    return std::exp(std::lgamma(n + 2.0 * lambda) - std::lgamma(2.0 * lambda) -
                    std::lgamma(n + 1.0));
}

double gegenbauer_normalized(int n, double lambda, double t) {
    check_args(n, lambda, t);
    if (lambda == 0.0)
        return chebyshev_t(n, t);
    if (n == 0)
        return 1.0;
    // Recurrence normalized so R_n(1) = 1 at every step; keeps |R| <= 1 and
    // avoids the growth of C_n^lambda(1) ~ n^{2*lambda-1}.
    double rm1 = 1.0;
    double r = t;
    for (int k = 2; k <= n; ++k) {
        double next = (2.0 * (k + lambda - 1.0) * t * r - (k - 1.0) * rm1) / (k + 2.0 * lambda - 1.0);
        rm1 = r;
        r = next;
    }
    return r;
}

double gegenbauer_normalized(int n, const SphereContext& ctx, double t) {
    return gegenbauer_normalized(n, ctx.lambda, t);
}

void gegenbauer_normalized_all(int K, double lambda, double t, std::span<double> out) {
    if (K < 0 || out.size() < static_cast<std::size_t>(K) + 1)
        throw std::invalid_argument("gegenbauer_normalized_all: bad output span");
    if (lambda == 0.0) {
        // T_k(cos th) = cos(k th): forward recurrence with periodic exact
        // refreshes (the plain recurrence drifts like k*eps at large K).
        double theta = std::acos(t);
        out[0] = 1.0;
        if (K >= 1)
            out[1] = t;
        for (int k = 2; k <= K; ++k) {
            if (k % 512 <= 1) { // restart the chain on two consecutive values
                out[k] = std::cos(k * theta);
                continue;
            }
            out[k] = 2.0 * t * out[k - 1] - out[k - 2];
        }
        return;
    }
    out[0] = 1.0;
    if (K >= 1)
        out[1] = t;
    for (int k = 2; k <= K; ++k)
        out[k] = (2.0 * (k + lambda - 1.0) * t * out[k - 1] - (k - 1.0) * out[k - 2]) /
                 (k + 2.0 * lambda - 1.0);
}

double gegenbauer_normalized_derivative(int n, double lambda, double t) {
    check_args(n, lambda, t);
    if (n == 0)
        return 0.0;
    double factor = n * (n + 2.0 * lambda) / (2.0 * lambda + 1.0);
    return factor * gegenbauer_normalized(n - 1, lambda + 1.0, t);
}

double harmonic_dim(int n, const SphereContext& ctx) {
    if (n < 0)
        throw std::domain_error("harmonic_dim: degree must be >= 0");
    if (n == 0)
        return 1.0;
    if (ctx.d == 1)
        return 2.0;
    return binom_shifted(n, ctx.d) - binom_shifted(n - 2, ctx.d);
}

double zonal_eval(int n, const SphereContext& ctx, double t) {
    check_args(n, ctx.lambda, t);
    if (ctx.d == 1)
        return n == 0 ? 1.0 : 2.0 * chebyshev_t(n, t);
    return harmonic_dim(n, ctx) * gegenbauer_normalized(n, ctx.lambda, t);
}

double gegenbauer_connection(int k, int n, double lambda, double mu) {
    if (!(0.0 < lambda && lambda < mu && mu < 2.0 * lambda + 1.0))
        throw std::domain_error("gegenbauer_connection: need 0 < lambda < mu < 2*lambda+1");
    if (k < 0 || n < 0)
        throw std::domain_error("gegenbauer_connection: k, n must be >= 0");
    double log_alpha = std::lgamma(2.0 * lambda) + std::lgamma(mu) +
                       2.0 * (mu - lambda) * std::log(2.0) + std::log(n + 2.0 * k + mu) +
                       std::lgamma(n + k + mu) + std::lgamma(k + mu - lambda) -
                       std::lgamma(2.0 * mu) - std::lgamma(mu - lambda) - std::lgamma(lambda) -
                       std::lgamma(k + 1.0) - std::lgamma(n + k + lambda + 1.0);
    return std::exp(log_alpha);
}

double gegenbauer_connection_sum(int n, double lambda, double mu, double theta, int K) {
    double t = std::cos(theta);
    double sin_pow = std::pow(std::sin(theta), 2.0 * mu);
    // One normalized-recurrence pass up to degree n+2K, compensated sum over
    // the oscillating terms.
    std::vector<double> r(static_cast<std::size_t>(n + 2 * K) + 1);
    gegenbauer_normalized_all(n + 2 * K, mu, t, r);
    double sum = 0.0, comp = 0.0;
    for (int k = 0; k <= K; ++k) {
        double term = gegenbauer_connection(k, n, lambda, mu) * r[n + 2 * k] * sin_pow;
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

double cesaro_ratio(int n, int k, double order) {
    if (k < 0 || k > n)
        throw std::domain_error("cesaro_ratio: need 0 <= k <= n");
    return std::exp(std::lgamma(n - k + order + 1.0) - std::lgamma(n - k + 1.0) -
                    std::lgamma(n + order + 1.0) + std::lgamma(n + 1.0));
}

double cesaro_kernel(int n, const SphereContext& ctx, double t) {
    if (n < 0)
        throw std::domain_error("cesaro_kernel: degree must be >= 0");
    double order = ctx.d + 1.0;
    std::vector<double> r(static_cast<std::size_t>(n) + 1);
    if (ctx.d == 1) {
        gegenbauer_normalized_all(n, 0.0, clamp_to_unit(t), r);
        double sum = cesaro_ratio(n, 0, order);
        for (int k = 1; k <= n; ++k)
            sum += cesaro_ratio(n, k, order) * 2.0 * r[k];
        return sum;
    }
    gegenbauer_normalized_all(n, ctx.lambda, clamp_to_unit(t), r);
    double sum = 0.0;
    for (int k = 0; k <= n; ++k)
        sum += cesaro_ratio(n, k, order) * harmonic_dim(k, ctx) * r[k];
    return sum;
}

} // namespace georiesz
