#include "georiesz/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "georiesz/quadrature.hpp"
#include "georiesz/rng.hpp"
#include "georiesz/specfun.hpp"

namespace georiesz {

namespace {

constexpr double kPi = std::numbers::pi;

// Certified bound on sum_{k > K} T_k for one-signed decaying terms
// T_k = F^(k) * a_k^d: geometric extrapolation when the measured ratio is
// clearly < 1, otherwise a power-law fit with a factor-2 safety margin.
double tail_bound_from_terms(const std::vector<int>& idx, const std::vector<double>& term_abs) {
    std::size_t w = term_abs.size();
    if (w < 4)
        throw std::runtime_error("tail bound: too few trailing terms");
    double last = term_abs.back();
    if (last <= 0.0)
        return 0.0;
    double max_ratio = 0.0;
    for (std::size_t i = 1; i < w; ++i)
        max_ratio = std::max(max_ratio, term_abs[i] / std::max(term_abs[i - 1], 1e-300));
    if (max_ratio < 0.9)
        return 2.0 * last * max_ratio / (1.0 - max_ratio);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < w; ++i) {
        double x = std::log(static_cast<double>(idx[i]));
        double y = std::log(std::max(term_abs[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (w * sxy - sx * sy) / (w * sxx - sx * sx);
    double alpha = -slope;
    if (alpha <= 1.05)
        throw std::runtime_error("tail bound: decay too slow to certify");
    return 2.0 * last * idx.back() / (alpha - 1.0);
}

std::vector<double> table_times_dims(const CoefficientTable& table) {
    std::vector<double> t(table.values.size());
    for (int k = 0; k <= table.max_degree(); ++k)
        t[static_cast<std::size_t>(k)] =
            std::abs(table.values[static_cast<std::size_t>(k)]) * harmonic_dim(k, table.ctx);
    return t;
}

double spectral_tail_bound(const CoefficientTable& table) {
    if (table.spec.kind == PotentialSpec::Kind::SpectralTable)
        return 0.0; // finite expansion, no tail
    int K = table.max_degree();
    std::vector<double> tk = table_times_dims(table);
    std::vector<int> idx;
    std::vector<double> vals;
    for (int k = K; k >= 1 && static_cast<int>(idx.size()) < 14; --k) {
        if (tk[static_cast<std::size_t>(k)] > 0.0) {
            idx.push_back(k);
            vals.push_back(tk[static_cast<std::size_t>(k)]);
        }
    }
    std::reverse(idx.begin(), idx.end());
    std::reverse(vals.begin(), vals.end());
    return tail_bound_from_terms(idx, vals);
}

} // namespace

double PositiveDefinitePotential::value_at_one() const {
    if (!flipped && !base.finite_at_one())
        return std::numeric_limits<double>::infinity();
    return value(1.0);
}

PositiveDefinitePotential make_positive_definite(const PotentialSpec& spec,
                                                 const SphereContext& ctx, int K, double tol) {
    spec.validate(ctx);
    PositiveDefinitePotential pd{spec, ctx, false, 0.0,
                                 CoefficientTable{ctx, spec, {}, {}}};
    switch (spec.kind) {
    case PotentialSpec::Kind::GeodesicPower:
        if (spec.delta > 0.0) {
            if (spec.delta > 1.0)
                throw std::domain_error(
                    "make_positive_definite: geodesic exponent must lie in (0, 1] or be negative");
            pd.flipped = true;
            pd.center = std::pow(0.5 * kPi + spec.epsilon, spec.delta);
        } else if (spec.epsilon <= 0.0) {
            throw std::domain_error(
                "make_positive_definite: negative exponents need eps > 0 for a finite diagonal");
        }
        break;
    case PotentialSpec::Kind::Logarithmic:
        if (spec.epsilon <= 0.0)
            throw std::domain_error("make_positive_definite: log potential needs eps > 0");
        break;
    case PotentialSpec::Kind::SpectralTable:
        break;
    case PotentialSpec::Kind::CapIndicator:
        throw std::domain_error("make_positive_definite: the cap indicator is not in this class");
    }

    pd.table = coefficient_table(spec, ctx, K, tol);
    if (pd.flipped) {
        pd.table.values[0] = pd.center - pd.table.values[0];
        for (int k = 1; k <= K; ++k)
            pd.table.values[static_cast<std::size_t>(k)] =
                -pd.table.values[static_cast<std::size_t>(k)];
    }
    // Entries that vanish within their error bars are structural zeros
    // (parity); represent them exactly.
    for (int k = 1; k <= K; ++k) {
        double v = pd.table.values[static_cast<std::size_t>(k)];
        double err = pd.table.abs_err[static_cast<std::size_t>(k)] + 1e-14;
        if (std::abs(v) <= 10.0 * err)
            pd.table.values[static_cast<std::size_t>(k)] = 0.0;
        else if (v < 0.0)
            throw std::runtime_error("make_positive_definite: negative coefficient at degree " +
                                     std::to_string(k));
    }
    return pd;
}

SpectralDiscrepancy l2_discrepancy_spectral(const PointSet& z, const CoefficientTable& table) {
    if (z.d != table.ctx.d)
        throw std::invalid_argument("l2_discrepancy_spectral: dimension mismatch");
    int K = table.max_degree();
    for (int k = 1; k <= K; ++k) {
        double v = table.values[static_cast<std::size_t>(k)];
        if (v < -(10.0 * table.abs_err[static_cast<std::size_t>(k)] + 1e-12))
            throw std::runtime_error("l2_discrepancy_spectral: table entry " + std::to_string(k) +
                                     " is negative; the potential is not positive definite");
    }
    std::vector<double> b = spectral_moments(z, table.ctx, K);
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
        double v = std::max(0.0, table.values[static_cast<std::size_t>(k)]);
        sum += v * b[static_cast<std::size_t>(k)];
    }
    SpectralDiscrepancy out;
    out.value = sum;
    out.tail_bound = spectral_tail_bound(table);
    return out;
}

StolarskyReport stolarsky_check(const PointSet& z, const PotentialSpec& spec,
                                const SphereContext& ctx, int K) {
    PositiveDefinitePotential pd = make_positive_definite(spec, ctx, K);
    int N = z.size();

    // Direct double sum with the diagonal.
    double off = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            off += pd.value(clamp_to_unit([&] {
                double dot = 0.0;
                auto xi = z.point(i), xj = z.point(j);
                for (std::size_t k = 0; k < xi.size(); ++k)
                    dot += xi[k] * xj[k];
                return dot;
            }()));
    StolarskyReport rep;
    rep.lhs = (N * pd.value_at_one() + 2.0 * off) / (static_cast<double>(N) * N);

    SpectralDiscrepancy d2 = l2_discrepancy_spectral(z, pd.table);
    rep.d_squared = d2.value;
    rep.truncation_bound = d2.tail_bound;

    // I_F(sigma) by quadrature, independent of the table.
    double i_base = uniform_energy(ctx, spec, 1e-12);
    rep.i_sigma = pd.flipped ? pd.center - i_base : i_base;

    rep.residual = std::abs(rep.lhs - rep.d_squared - rep.i_sigma);
    double table_err = 0.0;
    for (int k = 1; k <= pd.table.max_degree(); ++k)
        table_err += pd.table.abs_err[static_cast<std::size_t>(k)] * harmonic_dim(k, ctx);
    rep.numerical_slack = 1e-11 * (1.0 + std::abs(rep.i_sigma)) + table_err +
                          1e-14 * std::abs(rep.lhs) * N;
    return rep;
}

// ---------------------------------------------------------------------------
// Cap discrepancy
// ---------------------------------------------------------------------------

std::vector<double> cap_l2_coefficients(const SphereContext& ctx, int max_degree) {
    if (ctx.d < 2)
        throw std::domain_error("cap_l2_coefficients: requires d >= 2");
    // f^_t(n) = c_d (1-t^2)^{lambda+1/2} R_{n-1}^{lambda+1}(t), so the
    // t-integral of its square is c_d^2 int (1-t^2)^{2 lambda + 1} R^2 dt;
    // one Gauss-Legendre node set serves every degree (exact polynomial
    // integrands when 2*lambda is an integer... for d = 2 in particular).
    double c_d = cap_coefficient(0.0, 1, ctx); // shape factors are 1 at (n, t) = (1, 0)
    int m = max_degree + 4;
    QuadratureRule rule = gauss_legendre_newton(m);
    std::vector<double> out(static_cast<std::size_t>(max_degree) + 1, 0.0);
    std::vector<double> r(static_cast<std::size_t>(max_degree) + 1);
    double expo = 2.0 * ctx.lambda + 1.0;
    for (int j = 0; j < m; ++j) {
        double t = rule.nodes[j];
        double w = rule.weights[j] * std::pow(1.0 - t * t, expo);
        gegenbauer_normalized_all(max_degree, ctx.lambda + 1.0, t, r);
        for (int n = 1; n <= max_degree; ++n)
            out[static_cast<std::size_t>(n)] +=
                w * r[static_cast<std::size_t>(n - 1)] * r[static_cast<std::size_t>(n - 1)];
    }
    for (double& v : out)
        v *= c_d * c_d;
    return out;
}

double cap_l2_coefficient(int n, const SphereContext& ctx) {
    if (n < 1)
        throw std::domain_error("cap_l2_coefficient: requires n >= 1");
    return cap_l2_coefficients(ctx, n)[static_cast<std::size_t>(n)];
}

namespace {

double euclid_mean_distance(const SphereContext& ctx) {
    // int int |x - y| dsigma dsigma = prefac int_0^pi 2 sin(th/2) sin^{d-1} th dth
    double prefactor = std::exp(std::lgamma(0.5 * (ctx.d + 1)) - std::lgamma(0.5 * ctx.d) -
                                std::lgamma(0.5));
    double dm1 = ctx.d - 1.0;
    return prefactor * integrate_smooth(
                           [&](double th) {
                               return 2.0 * std::sin(0.5 * th) * std::pow(std::sin(th), dm1);
                           },
                           0.0, kPi, 4);
}

double euclid_energy_deficit(const PointSet& z, const SphereContext& ctx) {
    int N = z.size();
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
        auto xi = z.point(i);
        for (int j = i + 1; j < N; ++j) {
            auto xj = z.point(j);
            double d2 = 0.0;
            for (std::size_t k = 0; k < xi.size(); ++k)
                d2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
            sum += std::sqrt(d2);
        }
    }
    return euclid_mean_distance(ctx) - 2.0 * sum / (static_cast<double>(N) * N);
}

// Constant of the Euclidean-distance oracle, pinned against a high-budget
// Monte-Carlo run once per dimension.
double euclid_oracle_constant(const SphereContext& ctx);

CapDiscrepancy cap_monte_carlo(const PointSet& z, const SphereContext& ctx, std::int64_t budget,
                               std::uint64_t seed) {
    if (ctx.d != 2)
        throw std::domain_error("cap_discrepancy: monte_carlo sampling implemented for d = 2");
    if (budget < 100)
        throw std::domain_error("cap_discrepancy: budget too small");
    Rng rng(seed);
    int N = z.size();
    double m1 = 0.0, m2 = 0.0;
    for (std::int64_t s = 0; s < budget; ++s) {
        std::vector<double> x = rng.unit_vector(2);
        double t = rng.uniform(-1.0, 1.0);
        int count = 0;
        for (int i = 0; i < N; ++i) {
            auto p = z.point(i);
            if (p[0] * x[0] + p[1] * x[1] + p[2] * x[2] >= t)
                ++count;
        }
        double dev = static_cast<double>(count) / N - 0.5 * (1.0 - t);
        double dev2 = 2.0 * dev * dev; // the t-integral carries measure dt, total mass 2
        m1 += dev2;
        m2 += dev2 * dev2;
    }
    m1 /= budget;
    m2 /= budget;
    CapDiscrepancy out;
    out.value = m1;
    out.error = std::sqrt(std::max(0.0, m2 - m1 * m1) / budget);
    return out;
}

double euclid_oracle_constant(const SphereContext& ctx) {
    static std::mutex mtx;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(ctx.d);
    if (it != cache.end())
        return it->second;
    PointSet probe = generate(PointSetKind::Fibonacci, 12, ctx, 0);
    CapDiscrepancy mc = cap_monte_carlo(probe, ctx, 4000000, 20240801);
    double c = mc.value / euclid_energy_deficit(probe, ctx);
    cache.emplace(ctx.d, c);
    return c;
}

} // namespace

CapDiscrepancy cap_discrepancy(const PointSet& z, const SphereContext& ctx, CapMethod method,
                               std::int64_t budget, std::uint64_t seed, int max_degree) {
    if (z.d != ctx.d)
        throw std::invalid_argument("cap_discrepancy: dimension mismatch");
    switch (method) {
    case CapMethod::MonteCarlo:
        return cap_monte_carlo(z, ctx, budget, seed);
    case CapMethod::Spectral: {
        std::vector<double> cl2 = cap_l2_coefficients(ctx, max_degree);
        std::vector<double> b = spectral_moments(z, ctx, max_degree);
        double sum = 0.0;
        for (int n = 1; n <= max_degree; ++n)
            sum += cl2[static_cast<std::size_t>(n)] * b[static_cast<std::size_t>(n)];
        // tail: terms decay like n^{-d-1} a_n b_n/a_n; bound with b_n <= the
        // realized maximum over the last octave
        double bmax = 0.0;
        for (int n = max_degree / 2; n <= max_degree; ++n)
            bmax = std::max(bmax, b[static_cast<std::size_t>(n)] / harmonic_dim(n, ctx));
        std::vector<int> idx;
        std::vector<double> vals;
        for (int n = max_degree - 13; n <= max_degree; ++n) {
            idx.push_back(n);
            vals.push_back(cl2[static_cast<std::size_t>(n)] * harmonic_dim(n, ctx) *
                           std::max(bmax, 1e-12));
        }
        CapDiscrepancy out;
        out.value = sum;
        out.error = tail_bound_from_terms(idx, vals);
        return out;
    }
    case CapMethod::EuclideanOracle: {
        CapDiscrepancy out;
        double c = euclid_oracle_constant(ctx);
        out.value = c * euclid_energy_deficit(z, ctx);
        out.error = 0.01 * out.value; // constant pinned to ~1% by the MC budget
        return out;
    }
    }
    throw std::logic_error("cap_discrepancy: unknown method");
}

BoundsReport discrepancy_bounds_check(const PositiveDefinitePotential& pd, int N,
                                      int optimizer_iterations, std::uint64_t seed) {
    const SphereContext& ctx = pd.ctx;
    BoundsReport rep;
    int k_max = std::max(1, static_cast<int>(std::floor(std::pow(N, 1.0 / ctx.d))));
    k_max = std::min(k_max, pd.table.max_degree());
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k)
        if (pd.table.values[static_cast<std::size_t>(k)] > 0.0)
            lo = std::min(lo, pd.table.values[static_cast<std::size_t>(k)]);
    rep.lower_expr = lo;

    double t_small = std::pow(N, -1.0 / ctx.d);
    double fmax = 0.0;
    for (int i = 0; i <= 64; ++i) {
        double t = t_small * i / 64.0;
        fmax = std::max(fmax, pd.value_at_one() - pd.value(std::cos(t)));
    }
    rep.upper_expr = fmax / N;

    // Best D^2 over short multi-start optimization (maximizing the energy of
    // the base potential minimizes D^2 by the invariance identity).
    double i_base = uniform_energy(ctx, pd.base, 1e-12);
    double i_sigma = pd.flipped ? pd.center - i_base : i_base;
    double best = std::numeric_limits<double>::infinity();
    OptimizerOptions opts;
    opts.max_iterations = optimizer_iterations;
    opts.grad_tol = 1e-10;
    std::vector<PointSet> starts;
    starts.push_back(generate(PointSetKind::Fibonacci, N, ctx, 0));
    starts.push_back(generate(PointSetKind::EqualAreaCenters, N, ctx, 0));
    starts.push_back(generate(PointSetKind::RandomUniform, N, ctx, seed));
    for (const PointSet& z0 : starts) {
        OptimizeReport r = optimize_energy(z0, pd.base, opts);
        double off = discrete_energy(r.points, pd.base);
        double lhs_base = (N * (pd.flipped ? pd.center - pd.value_at_one() : pd.value_at_one()) +
                           2.0 * off) /
                          (static_cast<double>(N) * N);
        double lhs = pd.flipped ? pd.center - lhs_base : lhs_base;
        best = std::min(best, lhs - i_sigma);
    }
    rep.measured = best;
    rep.ratio_lower = rep.measured / rep.lower_expr;
    rep.ratio_upper = rep.upper_expr / std::max(rep.measured, 1e-300);
    rep.ordered = rep.lower_expr <= rep.measured * 20.0 && rep.measured <= rep.upper_expr * 20.0;
    return rep;
}

double cesaro_separation(const PointSet& z, const SphereContext& ctx, double a) {
    if (ctx.d != 2)
        throw std::domain_error("cesaro_separation: product rule implemented for d = 2");
    int N = z.size();
    int n = static_cast<int>(std::ceil(a * std::pow(N, 1.0 / ctx.d)));
    // Weights of the kernel expansion, then one recurrence pass per (x, z_j).
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        w[static_cast<std::size_t>(k)] = cesaro_ratio(n, k, ctx.d + 1.0) * harmonic_dim(k, ctx);

    int mz = n + 2;
    int mphi = 2 * n + 3;
    QuadratureRule rule = gauss_legendre_newton(mz);
    std::vector<double> r(static_cast<std::size_t>(n) + 1);
    double integral = 0.0;
    for (int iz = 0; iz < mz; ++iz) {
        double ct = rule.nodes[iz];
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int ip = 0; ip < mphi; ++ip) {
            double phi = 2.0 * kPi * ip / mphi;
            double x0 = st * std::cos(phi), x1 = st * std::sin(phi), x2 = ct;
            double field = 0.0;
            for (int j = 0; j < N; ++j) {
                auto p = z.point(j);
                double t = clamp_to_unit(x0 * p[0] + x1 * p[1] + x2 * p[2]);
                gegenbauer_normalized_all(n, ctx.lambda, t, r);
                double kn = 0.0;
                for (int k = 0; k <= n; ++k)
                    kn += w[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)];
                field += kn;
            }
            double dev = 1.0 - field / N;
            integral += rule.weights[iz] * dev * dev;
        }
    }
    // dsigma = dz dphi/(4 pi); phi handled by the uniform average
    return integral / (2.0 * mphi);
}

} // namespace georiesz
