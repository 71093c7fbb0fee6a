#include "georiesz/powerseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "georiesz/quadrature.hpp"
#include "georiesz/specfun.hpp"

namespace georiesz {

PowerSeries& PowerSeries::add_scaled(const PowerSeries& other, double factor) {
    std::size_t n = std::min(c.size(), other.c.size());
    for (std::size_t k = 0; k < n; ++k)
        c[k] += factor * other.c[k];
    return *this;
}

PowerSeries PowerSeries::multiply_truncated(const PowerSeries& other, int truncation) const {
    PowerSeries out(truncation);
    int ka = std::min<int>(truncation, this->truncation());
    for (int i = 0; i <= ka; ++i) {
        double ci = c[static_cast<std::size_t>(i)];
        if (ci == 0.0)
            continue;
        int kb = std::min<int>(truncation - i, other.truncation());
        for (int j = 0; j <= kb; ++j)
            out.c[static_cast<std::size_t>(i + j)] += ci * other.c[static_cast<std::size_t>(j)];
    }
    return out;
}

double PowerSeries::evaluate(double t) const {
    double r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;)
        r = r * t + c[k];
    return r;
}

PowerSeries arccos_series(int truncation) {
    if (truncation < 1)
        throw std::domain_error("arccos_series: truncation must be >= 1");
    PowerSeries a(truncation);
    for (int n = 0; 2 * n + 1 <= truncation; ++n) {
        // binom(2n, n) / (4^n (2n+1)) in log space
        double lg = std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0) -
                    n * std::log(4.0) - std::log(2.0 * n + 1.0);
        a.c[static_cast<std::size_t>(2 * n + 1)] = std::exp(lg);
    }
    return a;
}

PowerSeries potential_series(const PotentialSpec& spec, int truncation) {
    if (!(spec.is_geodesic() || spec.is_log()))
        throw std::domain_error("potential_series: only geodesic and logarithmic kinds expand");
    spec.validate();
    if (truncation < 1)
        throw std::domain_error("potential_series: truncation must be >= 1");
    if (truncation > 1 << 16)
        throw std::runtime_error("potential_series: truncation exceeds internal cap");

    double eps = spec.epsilon;
    double half_pi_eps = 0.5 * std::numbers::pi + eps;

    // u(t) = A(t) / (pi/2 + eps); u has no constant term, so u^j only feeds
    // coefficients of index >= j and the outer sum terminates exactly at K.
    PowerSeries u = arccos_series(truncation);
    for (double& ck : u.c)
        ck /= half_pi_eps;

    PowerSeries result(truncation);
    PowerSeries power = u;
    if (spec.is_log()) {
        result.c[0] = std::log(std::numbers::pi / half_pi_eps);
        for (int j = 1; j <= truncation; ++j) {
            result.add_scaled(power, 1.0 / j);
            if (j < truncation)
                power = power.multiply_truncated(u, truncation);
        }
    } else {
        double prefactor = std::pow(half_pi_eps, spec.delta);
        result.c[0] = prefactor;
        double binom = 1.0; // b_j = b_{j-1} (j-1-delta)/j, b_0 = 1
        for (int j = 1; j <= truncation; ++j) {
            binom *= (j - 1.0 - spec.delta) / j;
            result.add_scaled(power, prefactor * binom);
            if (j < truncation)
                power = power.multiply_truncated(u, truncation);
        }
    }
    return result;
}

PowerSeries potential_series_ode(const PotentialSpec& spec, int truncation) {
    if (!(spec.is_geodesic() || spec.is_log()))
        throw std::domain_error("potential_series_ode: only geodesic and logarithmic kinds");
    spec.validate();
    if (truncation < 1)
        throw std::domain_error("potential_series_ode: truncation must be >= 1");

    // G(t) = eps + arccos t; g = coefficients of G, w = coefficients of
    // (1-t^2)^{-1/2} = -G'.
    PowerSeries g = arccos_series(truncation);
    for (double& c : g.c)
        c = -c;
    g.c[0] = 0.5 * std::numbers::pi + spec.epsilon;
    std::vector<double> w(static_cast<std::size_t>(truncation) + 1, 0.0);
    w[0] = 1.0;
    for (int m = 1; 2 * m <= truncation; ++m)
        w[static_cast<std::size_t>(2 * m)] =
            w[static_cast<std::size_t>(2 * m - 2)] * (2.0 * m - 1.0) / (2.0 * m);

    PowerSeries y(truncation);
    const double g0 = g.c[0];
    if (spec.is_log()) {
        // G y' = -G' = w:   y_{k+1} = (w_k - sum_{j>=1} g_j (k+1-j) y_{k+1-j}) / ((k+1) g_0)
        y.c[0] = std::log(std::numbers::pi / g0);
        for (int k = 0; k < truncation; ++k) {
            double rhs = w[static_cast<std::size_t>(k)];
            for (int j = 1; j <= k; ++j)
                rhs -= g.c[static_cast<std::size_t>(j)] * (k + 1.0 - j) *
                       y.c[static_cast<std::size_t>(k + 1 - j)];
            y.c[static_cast<std::size_t>(k + 1)] = rhs / ((k + 1.0) * g0);
        }
    } else {
        // G y' = delta G' y = -delta w y
        y.c[0] = std::pow(g0, spec.delta);
        for (int k = 0; k < truncation; ++k) {
            double rhs = 0.0;
            for (int j = 0; j <= k; ++j)
                rhs -= spec.delta * w[static_cast<std::size_t>(j)] *
                       y.c[static_cast<std::size_t>(k - j)];
            for (int j = 1; j <= k; ++j)
                rhs -= g.c[static_cast<std::size_t>(j)] * (k + 1.0 - j) *
                       y.c[static_cast<std::size_t>(k + 1 - j)];
            y.c[static_cast<std::size_t>(k + 1)] = rhs / ((k + 1.0) * g0);
        }
    }
    return y;
}

double moment_integral(int k, int n, const SphereContext& ctx) {
    if (k < 0 || n < 0)
        throw std::domain_error("moment_integral: k, n must be >= 0");
    int m = (k + n) / 2 + 2;
    QuadratureRule rule = gauss_jacobi_rule(ctx.lambda, m);
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
        sum += rule.weights[j] * std::pow(rule.nodes[j], k) *
               gegenbauer_eval(n, ctx.lambda, rule.nodes[j]);
    return sum;
}

double moment_integral_closed(int k, int n, const SphereContext& ctx) {
    if (k < 0 || n < 0)
        throw std::domain_error("moment_integral_closed: k, n must be >= 0");
    if (k < n || (k - n) % 2 != 0)
        return 0.0;
    double lambda = ctx.lambda;
    if (lambda == 0.0) {
        // int t^k T_n w_0 dt = pi 2^{-k} binom(k, (k-n)/2)
        double lg = std::lgamma(k + 1.0) - std::lgamma(0.5 * (k - n) + 1.0) -
                    std::lgamma(0.5 * (k + n) + 1.0) - k * std::log(2.0);
        return std::numbers::pi * std::exp(lg);
    }
    // Rodrigues + n-fold integration by parts against the Beta integral.
    double lg = n * std::log(2.0) + std::lgamma(n + lambda) + std::lgamma(n + 2.0 * lambda) +
                std::lgamma(k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(lambda) -
                std::lgamma(2.0 * n + 2.0 * lambda) - std::lgamma(k - n + 1.0) +
                std::lgamma(0.5 * (k - n) + 0.5) + std::lgamma(n + lambda + 0.5) -
                std::lgamma(0.5 * (k + n) + lambda + 1.0);
    return std::exp(lg);
}

namespace {

// Power-law tail certificate from the last one-signed terms: fits
// |T_k| ~ k^{-alpha} over a trailing window and bounds the dropped sum by
// 2 |T_K| K/(alpha-1); a geometric bound is used instead when the measured
// ratio is clearly < 1 (the regularized eps > 0 regime).
double certify_tail(const std::vector<double>& term_abs, const std::vector<int>& term_idx) {
    std::size_t w = term_abs.size();
    if (w < 4)
        throw std::runtime_error("coefficient_via_series: too few terms to certify the tail");
    double last = term_abs.back();
    if (last == 0.0)
        return 0.0;
    double max_ratio = 0.0;
    for (std::size_t i = 1; i < w; ++i)
        max_ratio = std::max(max_ratio, term_abs[i] / std::max(term_abs[i - 1], 1e-300));
    if (max_ratio < 0.9)
        return 2.0 * last * max_ratio / (1.0 - max_ratio);
    // log-log least squares for the decay exponent
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < w; ++i) {
        double x = std::log(static_cast<double>(term_idx[i]));
        double y = std::log(std::max(term_abs[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (w * sxy - sx * sy) / (w * sxx - sx * sx);
    double alpha = -slope;
    if (alpha <= 1.05)
        throw std::runtime_error("coefficient_via_series: tail decay too slow to certify");
    return 2.0 * last * term_idx.back() / (alpha - 1.0);
}

} // namespace

namespace {

// Ratio m(k+2, n)/m(k, n) of the closed-form moments, exact rational update.
double moment_ratio(int k, int n, double lambda) {
    if (lambda == 0.0)
        return 0.25 * (k + 1.0) * (k + 2.0) /
               ((0.5 * (k - n) + 1.0) * (0.5 * (k + n) + 1.0));
    return (k + 1.0) * (k + 2.0) / (2.0 * (k - n + 2.0) * (0.5 * (k + n) + lambda + 1.0));
}

// Solves small normal-equation systems by Gaussian elimination with pivoting.
template <int M> bool solve_dense(double A[M][M], double b[M], double x[M]) {
    int piv[M];
    for (int i = 0; i < M; ++i)
        piv[i] = i;
    for (int c = 0; c < M; ++c) {
        int best = c;
        for (int r = c + 1; r < M; ++r)
            if (std::abs(A[piv[r]][c]) > std::abs(A[piv[best]][c]))
                best = r;
        std::swap(piv[c], piv[best]);
        if (std::abs(A[piv[c]][c]) < 1e-300)
            return false;
        for (int r = c + 1; r < M; ++r) {
            double f = A[piv[r]][c] / A[piv[c]][c];
            for (int c2 = c; c2 < M; ++c2)
                A[piv[r]][c2] -= f * A[piv[c]][c2];
            b[piv[r]] -= f * b[piv[c]];
        }
    }
    for (int c = M - 1; c >= 0; --c) {
        double s = b[piv[c]];
        for (int c2 = c + 1; c2 < M; ++c2)
            s -= A[piv[c]][c2] * x[c2];
        x[c] = s / A[piv[c]][c];
    }
    return true;
}

} // namespace

SeriesCoefficient coefficient_via_series(const PotentialSpec& spec, int n,
                                         const SphereContext& ctx, int truncation) {
    if (truncation < std::max(n, 32))
        throw std::domain_error("coefficient_via_series: truncation must be >= max(n, 32)");
    PowerSeries a = potential_series_ode(spec, truncation);
    const double lambda = ctx.lambda;

    double value_raw = 0.0;
    std::vector<double> window_abs;
    std::vector<int> window_idx;
    {
        int k0 = n;
        double m = moment_integral_closed(k0, n, ctx);
        for (int k = k0; k <= truncation; k += 2) {
            double term = a.c[static_cast<std::size_t>(k)] * m;
            value_raw += term;
            if (k >= truncation - 24) {
                window_abs.push_back(std::abs(term));
                window_idx.push_back(std::max(k, 1));
            }
            m *= moment_ratio(k, n, lambda);
        }
    }

    double tail_raw = 0.0;
    bool extrapolated = false;
    if (spec.epsilon > 0.0) {
        // Behind the regularization the potential keeps sqrt branch points at
        // t = +-1, so within one parity class a_k k^{3/2} has an asymptotic
        // expansion in 1/k.  Fit four terms on [K/2, K] (recentred to x = K/k
        // in [1, 2] to keep the normal equations sane), extrapolate the tail
        // with the exact moment recurrence, and certify by the in-window
        // misfit.
        std::vector<int> ks;
        std::vector<double> zs;
        int k_first = std::max(n + 2, truncation / 2);
        if ((k_first - n) % 2 != 0)
            ++k_first;
        for (int k = k_first; k <= truncation; k += 2) {
            ks.push_back(k);
            zs.push_back(a.c[static_cast<std::size_t>(k)] * std::pow(k, 1.5));
        }
        double zmax = 0.0;
        for (double z : zs)
            zmax = std::max(zmax, std::abs(z));
        if (zmax < 1e-280) {
            tail_raw = 0.0; // the whole parity class vanishes
            extrapolated = true;
        } else if (ks.size() >= 24) {
            constexpr int B = 6;
            double A[B][B] = {};
            double rhs[B] = {};
            auto basis = [&](int k, double* phi) {
                double x = static_cast<double>(truncation) / k;
                phi[0] = 1.0;
                for (int b = 1; b < B; ++b)
                    phi[b] = phi[b - 1] * x;
            };
            for (std::size_t i = 0; i < ks.size(); ++i) {
                double phi[B];
                basis(ks[i], phi);
                for (int r = 0; r < B; ++r) {
                    rhs[r] += phi[r] * zs[i];
                    for (int c = 0; c < B; ++c)
                        A[r][c] += phi[r] * phi[c];
                }
            }
            double coef[B];
            if (solve_dense<B>(A, rhs, coef)) {
                auto model_z = [&](int k) {
                    double phi[B];
                    basis(k, phi);
                    double fit = 0.0;
                    for (int b = 0; b < B; ++b)
                        fit += coef[b] * phi[b];
                    return fit;
                };
                double rel_misfit = 0.0;
                for (std::size_t i = 0; i < ks.size(); ++i)
                    rel_misfit = std::max(rel_misfit, std::abs(zs[i] - model_z(ks[i])) / zmax);
                if (rel_misfit < 0.02) {
                    int k = truncation + 1;
                    if ((k - n) % 2 != 0)
                        ++k;
                    double m = moment_integral_closed(k, n, ctx);
                    double tail = 0.0, tail_abs = 0.0, term = 0.0;
                    int k_last = k;
                    for (; k < 2000000; k += 2) {
                        term = std::pow(k, -1.5) * model_z(k) * m;
                        tail += term;
                        tail_abs += std::abs(term);
                        k_last = k;
                        if (std::abs(term) < 1e-18 * (std::abs(value_raw) + tail_abs) &&
                            k > 4 * truncation)
                            break;
                        m *= moment_ratio(k, n, lambda);
                    }
                    // Past the cutoff the model terms fall like k^{-p} with
                    // p = 2 + lambda; close the sum with the integral
                    // remainder of that power law.
                    double p = 2.0 + lambda;
                    double remainder = term * std::pow(k_last, p) *
                                       std::pow(k_last + 1.0, 1.0 - p) / (2.0 * (p - 1.0));
                    tail += remainder;
                    tail_raw = 2.0 * rel_misfit * (tail_abs + std::abs(remainder)) +
                               std::abs(remainder) * 8.0 * p / k_last;
                    value_raw += tail;
                    extrapolated = true;
                }
            }
        }
    }
    if (!extrapolated)
        tail_raw = certify_tail(window_abs, window_idx);

    // Same normalization as the quadrature route.
    double scale;
    if (ctx.is_circle()) {
        scale = 1.0 / std::numbers::pi;
    } else {
        double prefactor = std::exp(std::lgamma(ctx.lambda + 1.0) -
                                    std::lgamma(ctx.lambda + 0.5) - std::lgamma(0.5));
        scale = prefactor / gegenbauer_at_one(n, ctx.lambda);
    }
    SeriesCoefficient out;
    out.value = scale * value_raw;
    out.tail_bound = scale * std::abs(tail_raw);
    if (n >= 1 && out.tail_bound > std::abs(out.value) && out.tail_bound > 1e-300)
        throw std::runtime_error("coefficient_via_series: tail bound exceeds partial sum for n=" +
                                 std::to_string(n));
    return out;
}

} // namespace georiesz
