#include "georiesz/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "georiesz/quadrature.hpp"
#include "georiesz/rng.hpp"
#include "georiesz/specfun.hpp"

namespace georiesz {

// ---------------------------------------------------------------------------
// PotentialSpec
// ---------------------------------------------------------------------------

PotentialSpec PotentialSpec::geodesic(double delta, double epsilon) {
    PotentialSpec s;
    s.kind = Kind::GeodesicPower;
    s.delta = delta;
    s.epsilon = epsilon;
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::logarithmic(double epsilon) {
    PotentialSpec s;
    s.kind = Kind::Logarithmic;
    s.epsilon = epsilon;
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::cap(double height) {
    PotentialSpec s;
    s.kind = Kind::CapIndicator;
    s.cap_height = height;
    s.validate();
    return s;
}

PotentialSpec PotentialSpec::spectral(std::vector<double> coefficients) {
    PotentialSpec s;
    s.kind = Kind::SpectralTable;
    s.table = std::move(coefficients);
    s.validate();
    return s;
}

void PotentialSpec::validate() const {
    switch (kind) {
    case Kind::GeodesicPower:
        if (delta == 0.0)
            throw std::domain_error("PotentialSpec: geodesic power requires delta != 0");
        [[fallthrough]];
    case Kind::Logarithmic:
        if (epsilon < 0.0 || epsilon >= 1.0)
            throw std::domain_error("PotentialSpec: epsilon must lie in [0, 1)");
        break;
    case Kind::CapIndicator:
        if (std::abs(cap_height) > 1.0)
            throw std::domain_error("PotentialSpec: cap height must lie in [-1, 1]");
        break;
    case Kind::SpectralTable:
        if (table.empty())
            throw std::domain_error("PotentialSpec: spectral table must be non-empty");
        break;
    }
}

void PotentialSpec::validate(const SphereContext& ctx) const {
    validate();
    if (kind == Kind::GeodesicPower && delta <= -ctx.d)
        throw std::domain_error("PotentialSpec: geodesic power requires delta > -d for S^" +
                                std::to_string(ctx.d));
}

double PotentialSpec::value_theta(double theta, const SphereContext& ctx) const {
    switch (kind) {
    case Kind::GeodesicPower:
        return std::pow(epsilon + theta, delta);
    case Kind::Logarithmic:
        return std::log(std::numbers::pi / (epsilon + theta));
    case Kind::CapIndicator:
        return std::cos(theta) >= cap_height ? 1.0 : 0.0;
    case Kind::SpectralTable: {
        double t = std::cos(theta);
        double sum = 0.0;
        for (std::size_t n = 0; n < table.size(); ++n)
            sum += table[n] * zonal_eval(static_cast<int>(n), ctx, t);
        return sum;
    }
    }
    return 0.0;
}

double PotentialSpec::value(double t, const SphereContext& ctx) const {
    t = clamp_to_unit(t);
    if (kind == Kind::CapIndicator)
        return t >= cap_height ? 1.0 : 0.0;
    if (kind == Kind::SpectralTable) {
        double sum = 0.0;
        for (std::size_t n = 0; n < table.size(); ++n)
            sum += table[n] * zonal_eval(static_cast<int>(n), ctx, t);
        return sum;
    }
    return value_theta(std::acos(t), ctx);
}

bool PotentialSpec::finite_at_one() const {
    switch (kind) {
    case Kind::GeodesicPower:
        return delta > 0.0 || epsilon > 0.0;
    case Kind::Logarithmic:
        return epsilon > 0.0;
    default:
        return true;
    }
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

namespace {

double coefficient_prefactor(const SphereContext& ctx) {
    if (ctx.is_circle())
        return 1.0 / std::numbers::pi;
    return std::exp(std::lgamma(ctx.lambda + 1.0) - std::lgamma(ctx.lambda + 0.5) -
                    std::lgamma(0.5));
}

// Leading power of F(cos th) R_n(cos th) sin^{2 lambda} th at th = 0.
double grading_power(const PotentialSpec& spec, const SphereContext& ctx) {
    if (spec.is_geodesic() && spec.epsilon == 0.0)
        return spec.delta + 2.0 * ctx.lambda;
    return 0.0; // smooth, or removable log singularity handled by descent
}

double cap_mass(double height, const SphereContext& ctx) {
    double theta_c = std::acos(clamp_to_unit(height));
    double prefactor = coefficient_prefactor(ctx);
    double two_lambda = 2.0 * ctx.lambda;
    return prefactor * integrate_smooth(
                           [&](double th) { return std::pow(std::sin(th), two_lambda); }, 0.0,
                           theta_c, 1);
}

// Direct quadrature of the cap-indicator coefficient (validation route).
double cap_coefficient_direct(double height, int n, const SphereContext& ctx) {
    double theta_c = std::acos(clamp_to_unit(height));
    double lambda = ctx.lambda;
    double two_lambda = 2.0 * lambda;
    double val = integrate_smooth(
        [&](double th) {
            return gegenbauer_normalized(n, lambda, std::cos(th)) *
                   std::pow(std::sin(th), two_lambda);
        },
        0.0, theta_c, n + 1);
    return coefficient_prefactor(ctx) * val;
}

double cap_constant(const SphereContext& ctx) {
    static std::mutex mtx;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(ctx.d);
    if (it != cache.end())
        return it->second;
    // Pin the constant at (n, t) = (1, 0) where the closed-form shape factors
    // are exactly 1, then cross-validate the two routes.
    double c = cap_coefficient_direct(0.0, 1, ctx);
    for (int n = 1; n <= 32; n += (n < 8 ? 1 : 7)) {
        for (double t : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
            double closed = c * std::pow(1.0 - t * t, ctx.lambda + 0.5) *
                            gegenbauer_normalized(n - 1, ctx.lambda + 1.0, t);
            double direct = cap_coefficient_direct(t, n, ctx);
            if (std::abs(closed - direct) > 1e-9 * std::max(1.0, std::abs(closed)))
                throw std::runtime_error(
                    "cap_coefficient: closed form and direct quadrature disagree at n=" +
                    std::to_string(n) + " t=" + std::to_string(t));
        }
    }
    cache.emplace(ctx.d, c);
    return c;
}

} // namespace

double cap_coefficient(double height, int n, const SphereContext& ctx) {
    if (ctx.d < 2)
        throw std::domain_error("cap_coefficient: requires d >= 2");
    if (n < 1)
        throw std::domain_error("cap_coefficient: requires n >= 1");
    if (std::abs(height) > 1.0)
        throw std::domain_error("cap_coefficient: height must lie in [-1, 1]");
    double c = cap_constant(ctx);
    return c * std::pow(1.0 - height * height, ctx.lambda + 0.5) *
           gegenbauer_normalized(n - 1, ctx.lambda + 1.0, height);
}

double gegenbauer_coefficient(const PotentialSpec& spec, int n, const SphereContext& ctx,
                              double* abs_err, double tol) {
    if (n < 0)
        throw std::domain_error("gegenbauer_coefficient: degree must be >= 0");
    spec.validate(ctx);

    if (spec.kind == PotentialSpec::Kind::SpectralTable) {
        // Orthogonality makes the coefficient the stored entry itself.
        if (abs_err)
            *abs_err = 0.0;
        return n < static_cast<int>(spec.table.size()) ? spec.table[static_cast<std::size_t>(n)]
                                                       : 0.0;
    }
    if (spec.kind == PotentialSpec::Kind::CapIndicator) {
        if (abs_err)
            *abs_err = 1e-12;
        if (n == 0)
            return cap_mass(spec.cap_height, ctx);
        if (ctx.is_circle())
            return cap_coefficient_direct(spec.cap_height, n, ctx);
        return cap_coefficient(spec.cap_height, n, ctx);
    }

    double prefactor = coefficient_prefactor(ctx);
    double lambda = ctx.lambda;
    double two_lambda = 2.0 * lambda;
    std::function<double(double)> g;
    if (ctx.is_circle())
        g = [&](double th) { return spec.value_theta(th, ctx) * std::cos(n * th); };
    else
        g = [&](double th) {
            return spec.value_theta(th, ctx) * gegenbauer_normalized(n, lambda, std::cos(th)) *
                   std::pow(std::sin(th), two_lambda);
        };

    ThetaIntegralOptions opt;
    opt.abs_tol = tol;
    opt.oscillation_degree = n + 1;
    opt.singular_power = grading_power(spec, ctx);
    ThetaIntegral res = integrate_theta_graded(g, opt);
    if (!res.converged)
        throw std::runtime_error("gegenbauer_coefficient: quadrature did not converge for n=" +
                                 std::to_string(n));
    if (abs_err)
        *abs_err = prefactor * res.abs_err;
    return prefactor * res.value;
}

CoefficientTable coefficient_table(const PotentialSpec& spec, const SphereContext& ctx, int K,
                                   double tol) {
    if (K < 0)
        throw std::domain_error("coefficient_table: K must be >= 0");
    spec.validate(ctx);
    CoefficientTable table{ctx, spec, std::vector<double>(static_cast<std::size_t>(K) + 1, 0.0),
                           std::vector<double>(static_cast<std::size_t>(K) + 1, 0.0)};

    if (spec.kind == PotentialSpec::Kind::SpectralTable ||
        spec.kind == PotentialSpec::Kind::CapIndicator) {
        for (int n = 0; n <= K; ++n)
            table.values[static_cast<std::size_t>(n)] =
                gegenbauer_coefficient(spec, n, ctx, &table.abs_err[static_cast<std::size_t>(n)]);
        return table;
    }

    // Geodesic / logarithmic: one shared graded node set, one normalized
    // recurrence pass per node.
    const double pi = std::numbers::pi;
    double lambda = ctx.lambda;
    double two_lambda = 2.0 * lambda;
    double prefactor = coefficient_prefactor(ctx);
    double power = grading_power(spec, ctx);
    const QuadratureRule& gl = gauss_legendre_rule(32);

    std::vector<double> r(static_cast<std::size_t>(K) + 1);
    std::vector<double> level(static_cast<std::size_t>(K) + 1);
    double abs_mass = 0.0; // total |weight * F| seen, for the noise floor
    auto accumulate_node = [&](double theta, double weight, std::vector<double>& into) {
        double w = weight * spec.value_theta(theta, ctx);
        if (!ctx.is_circle())
            w *= std::pow(std::sin(theta), two_lambda);
        abs_mass += std::abs(w);
        gegenbauer_normalized_all(K, ctx.is_circle() ? 0.0 : lambda, std::cos(theta), r);
        for (int k = 0; k <= K; ++k)
            into[static_cast<std::size_t>(k)] += w * r[static_cast<std::size_t>(k)];
    };

    // Weighted (or plain) closure of [0, a] at the given rule order; error
    // gauged per entry by comparing two orders.
    auto cap_batch = [&](double a, int order, std::vector<double>& into) {
        std::fill(into.begin(), into.end(), 0.0);
        if (power == 0.0) {
            QuadratureRule rule = gauss_legendre_rule(order);
            for (int j = 0; j < order; ++j) {
                double theta = 0.5 * a * (1.0 + rule.nodes[j]);
                accumulate_node(theta, 0.5 * a * rule.weights[j], into);
            }
            return;
        }
        QuadratureRule rule = gauss_jacobi_general(0.0, power, order);
        double scale = std::pow(0.5 * a, power + 1.0);
        for (int j = 0; j < order; ++j) {
            double theta = 0.5 * a * (1.0 + rule.nodes[j]);
            accumulate_node(theta, scale * rule.weights[j] * std::pow(theta, -power), into);
        }
    };

    double a = pi;
    std::vector<double> cap32(static_cast<std::size_t>(K) + 1);
    std::vector<double> cap16(static_cast<std::size_t>(K) + 1);
    bool converged = false;
    for (int depth = 0; depth < 60 && !converged; ++depth) {
        double b = 0.5 * a;
        std::fill(level.begin(), level.end(), 0.0);
        int panels = std::max(1, static_cast<int>(std::ceil((a - b) * std::max(1, K) / 8.0)));
        double w = (a - b) / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = b + p * w;
            for (int j = 0; j < gl.order; ++j)
                accumulate_node(0.5 * (lo + lo + w) + 0.5 * w * gl.nodes[j],
                                0.5 * w * gl.weights[j], level);
        }
        for (int k = 0; k <= K; ++k)
            table.values[static_cast<std::size_t>(k)] += level[static_cast<std::size_t>(k)];
        a = b;

        double level_max = 0.0;
        for (double v : level)
            level_max = std::max(level_max, std::abs(v));
        bool oscillation_resolved = a * std::max(1, K) <= 8.0;
        if (depth < 4 || !oscillation_resolved)
            continue;

        cap_batch(a, 32, cap32);
        cap_batch(a, 16, cap16);
        double cap_err_max = 0.0;
        for (int k = 0; k <= K; ++k)
            cap_err_max = std::max(cap_err_max, std::abs(cap32[static_cast<std::size_t>(k)] -
                                                         cap16[static_cast<std::size_t>(k)]));
        if (cap_err_max < 0.5 * tol || level_max < 0.25 * tol)
            converged = true;
    }
    if (!converged)
        throw std::runtime_error("coefficient_table: graded quadrature did not converge");
    for (int k = 0; k <= K; ++k) {
        table.values[static_cast<std::size_t>(k)] += cap32[static_cast<std::size_t>(k)];
        table.values[static_cast<std::size_t>(k)] *= prefactor;
        // cap-closure error plus the recurrence drift floor (forward error
        // of the three-term recurrence grows linearly in the degree, scaled
        // by the absolute node mass)
        table.abs_err[static_cast<std::size_t>(k)] =
            prefactor * (std::abs(cap32[static_cast<std::size_t>(k)] -
                                  cap16[static_cast<std::size_t>(k)]) +
                         abs_mass * (k + 8.0) * 4e-16) +
            1e-15 * std::abs(table.values[static_cast<std::size_t>(k)]);
    }
    return table;
}

double table_reconstruct(const CoefficientTable& table, double t) {
    int K = table.max_degree();
    std::vector<double> r(static_cast<std::size_t>(K) + 1);
    gegenbauer_normalized_all(K, table.ctx.is_circle() ? 0.0 : table.ctx.lambda, clamp_to_unit(t),
                              r);
    double sum = 0.0;
    for (int n = 0; n <= K; ++n) {
        double dim = table.ctx.is_circle() ? (n == 0 ? 1.0 : 2.0) : harmonic_dim(n, table.ctx);
        sum += table.values[static_cast<std::size_t>(n)] * dim * r[static_cast<std::size_t>(n)];
    }
    return sum;
}

DecayFit decay_exponent(const CoefficientTable& table, int n_min, int n_max) {
    if (n_min < 1 || n_max > table.max_degree() || n_min >= n_max)
        throw std::domain_error("decay_exponent: bad degree window");
    double scale = 0.0;
    for (int n = n_min; n <= n_max; ++n)
        scale = std::max(scale, std::abs(table.values[static_cast<std::size_t>(n)]));
    std::vector<double> lx, ly;
    for (int n = n_min; n <= n_max; ++n) {
        double v = std::abs(table.values[static_cast<std::size_t>(n)]);
        if (v > 1e-12 * scale) { // skip structural (parity) zeros
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(v));
        }
    }
    std::size_t m = lx.size();
    if (m < 4)
        throw std::runtime_error("decay_exponent: fewer than 4 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    DecayFit fit;
    fit.points = static_cast<int>(m);
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - fit.slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double e = ly[i] - (intercept + fit.slope * lx[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

double funk_hecke_residual(const PotentialSpec& spec, int n, const SphereContext& ctx,
                           std::uint64_t seed, int samples) {
    if (ctx.d != 2)
        throw std::domain_error("funk_hecke_residual: product quadrature implemented for d = 2");
    spec.validate(ctx);
    Rng rng(seed);
    std::vector<double> p = rng.unit_vector(2);
    double coeff = gegenbauer_coefficient(spec, n, ctx);

    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> y = rng.unit_vector(2);
        // Orthonormal frame {y, e1, e2}
        int axis = std::abs(y[0]) < std::abs(y[1]) ? (std::abs(y[0]) < std::abs(y[2]) ? 0 : 2)
                                                   : (std::abs(y[1]) < std::abs(y[2]) ? 1 : 2);
        std::vector<double> e1(3, 0.0);
        e1[static_cast<std::size_t>(axis)] = 1.0;
        double proj = e1[0] * y[0] + e1[1] * y[1] + e1[2] * y[2];
        double norm = 0.0;
        for (int k = 0; k < 3; ++k) {
            e1[static_cast<std::size_t>(k)] -= proj * y[static_cast<std::size_t>(k)];
            norm += e1[static_cast<std::size_t>(k)] * e1[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k < 3; ++k)
            e1[static_cast<std::size_t>(k)] /= std::sqrt(norm);
        std::vector<double> e2 = {y[1] * e1[2] - y[2] * e1[1], y[2] * e1[0] - y[0] * e1[2],
                                  y[0] * e1[1] - y[1] * e1[0]};

        int m_phi = 2 * n + 4;
        auto g = [&](double theta) {
            // phi-average of the zonal factor (trapezoid is exact here),
            // times F(cos theta) sin(theta).
            double ct = std::cos(theta), st = std::sin(theta);
            double sum = 0.0;
            for (int j = 0; j < m_phi; ++j) {
                double phi = 2.0 * std::numbers::pi * j / m_phi;
                double dot = 0.0;
                for (int k = 0; k < 3; ++k) {
                    double xk = ct * y[static_cast<std::size_t>(k)] +
                                st * (std::cos(phi) * e1[static_cast<std::size_t>(k)] +
                                      std::sin(phi) * e2[static_cast<std::size_t>(k)]);
                    dot += xk * p[static_cast<std::size_t>(k)];
                }
                sum += zonal_eval(n, ctx, clamp_to_unit(dot));
            }
            return spec.value_theta(theta, ctx) * st * (sum / m_phi);
        };
        ThetaIntegralOptions opt;
        opt.abs_tol = 1e-12;
        opt.oscillation_degree = n + 1;
        opt.singular_power = grading_power(spec, ctx) == 0.0
                                 ? 0.0
                                 : spec.delta + 1.0; // sin factor contributes one power on S^2
        ThetaIntegral res = integrate_theta_graded(g, opt);
        double lhs = 0.5 * res.value; // dsigma = sin(theta) dtheta dphi / (4 pi)
        double ydotp = 0.0;
        for (int k = 0; k < 3; ++k)
            ydotp += y[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
        double rhs = coeff * zonal_eval(n, ctx, clamp_to_unit(ydotp));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    return worst;
}

std::string table_to_text(const CoefficientTable& table) {
    std::string out = "# n value abs_err\n";
    char buf[128];
    for (int n = 0; n <= table.max_degree(); ++n) {
        std::snprintf(buf, sizeof(buf), "%d %.17g %.17g\n", n,
                      table.values[static_cast<std::size_t>(n)],
                      table.abs_err[static_cast<std::size_t>(n)]);
        out += buf;
    }
    return out;
}

} // namespace georiesz
