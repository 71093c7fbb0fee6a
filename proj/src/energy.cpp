#include "georiesz/energy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "georiesz/coefficients.hpp"
#include "georiesz/quadrature.hpp"
#include "georiesz/specfun.hpp"

namespace georiesz {

void PointSet::check_norms(double tol) const {
    for (int i = 0; i < size(); ++i) {
        double norm2 = 0.0;
        for (double xk : point(i))
            norm2 += xk * xk;
        if (std::abs(std::sqrt(norm2) - 1.0) > tol)
            throw std::runtime_error("PointSet: point " + std::to_string(i) +
                                     " is off the sphere by more than tolerance");
    }
}

double PointSet::min_pairwise_distance() const {
    int n = size();
    if (n < 2)
        return std::numbers::pi;
    double best = std::numbers::pi;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::min(best, geodesic_distance(point(i), point(j)));
    return best;
}

PointSet read_pointset_text(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_pointset_text: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v)
            row.push_back(v);
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::runtime_error("read_pointset_text: no points in " + path);
    std::size_t width = rows.front().size();
    if (width < 2)
        throw std::runtime_error("read_pointset_text: ambient dimension must be >= 2");
    PointSet z(static_cast<int>(width) - 1, static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width)
            throw std::runtime_error("read_pointset_text: ragged row " + std::to_string(i));
        for (std::size_t k = 0; k < width; ++k)
            z.coords[i * width + k] = rows[i][k];
    }
    return z;
}

void write_pointset_text(const PointSet& z, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_pointset_text: cannot open " + path);
    char buf[64];
    for (int i = 0; i < z.size(); ++i) {
        auto p = z.point(i);
        for (std::size_t k = 0; k < p.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[k]);
            out << buf << (k + 1 < p.size() ? " " : "\n");
        }
    }
}

MeasureSpec MeasureSpec::uniform() { return MeasureSpec{}; }

MeasureSpec MeasureSpec::discrete(PointSet z) {
    MeasureSpec m;
    m.kind = Kind::Discrete;
    m.points = std::move(z);
    return m;
}

MeasureSpec MeasureSpec::two_point() {
    MeasureSpec m;
    m.kind = Kind::TwoPoint;
    return m;
}

MeasureSpec MeasureSpec::perturbed_harmonic(int degree, double amplitude) {
    if (degree < 1)
        throw std::domain_error("MeasureSpec: perturbed harmonic degree must be >= 1");
    MeasureSpec m;
    m.kind = Kind::PerturbedHarmonic;
    m.degree = degree;
    m.amplitude = amplitude;
    return m;
}

double uniform_energy(const SphereContext& ctx, const PotentialSpec& spec, double tol) {
    spec.validate(ctx);
    switch (spec.kind) {
    case PotentialSpec::Kind::SpectralTable:
        return spec.table[0]; // b_0 = 1, all higher moments vanish for sigma
    case PotentialSpec::Kind::CapIndicator:
        return gegenbauer_coefficient(spec, 0, ctx);
    default:
        break;
    }
    double prefactor = std::exp(std::lgamma(0.5 * (ctx.d + 1)) - std::lgamma(0.5 * ctx.d) -
                                std::lgamma(0.5));
    double dm1 = ctx.d - 1.0;
    ThetaIntegralOptions opt;
    opt.abs_tol = tol;
    opt.singular_power =
        (spec.is_geodesic() && spec.epsilon == 0.0) ? spec.delta + dm1 : 0.0;
    ThetaIntegral res = integrate_theta_graded(
        [&](double th) { return spec.value_theta(th, ctx) * std::pow(std::sin(th), dm1); }, opt);
    if (!res.converged)
        throw std::runtime_error("uniform_energy: quadrature did not converge");
    return prefactor * res.value;
}

namespace {

// F as a function of the geodesic distance, with the power specialized for
// the hot exponents.
struct PairPotential {
    enum class Op { Pow, Inverse, Sqrt, Square, Identity, Log };
    Op op = Op::Pow;
    double delta = 1.0;
    double eps = 0.0;

    explicit PairPotential(const PotentialSpec& spec) {
        eps = spec.epsilon;
        if (spec.is_log()) {
            op = Op::Log;
            return;
        }
        delta = spec.delta;
        if (delta == -1.0)
            op = Op::Inverse;
        else if (delta == 0.5)
            op = Op::Sqrt;
        else if (delta == 2.0)
            op = Op::Square;
        else if (delta == 1.0)
            op = Op::Identity;
    }

    double operator()(double rho) const {
        double r = eps + rho;
        switch (op) {
        case Op::Inverse:
            return 1.0 / r;
        case Op::Sqrt:
            return std::sqrt(r);
        case Op::Square:
            return r * r;
        case Op::Identity:
            return r;
        case Op::Log:
            return std::log(std::numbers::pi / r);
        case Op::Pow:
            break;
        }
        return std::pow(r, delta);
    }
};

} // namespace

double discrete_energy(const PointSet& z, const PotentialSpec& spec) {
    SphereContext ctx(z.d);
    // Parameter sanity only: the integrability bound delta > -d constrains
    // energy integrals, not finite sums.
    spec.validate();
    int n = z.size();
    const bool singular_diag = !spec.finite_at_one();
    const bool distance_kind = spec.is_geodesic() || spec.is_log();
    PairPotential f(spec);
    double sum = 0.0;
    const int dim = z.d + 1;
    const double* c = z.coords.data();
    for (int i = 0; i < n; ++i) {
        const double* xi = c + static_cast<std::size_t>(i) * dim;
        for (int j = i + 1; j < n; ++j) {
            const double* xj = c + static_cast<std::size_t>(j) * dim;
            double dot = 0.0;
            for (int k = 0; k < dim; ++k)
                dot += xi[k] * xj[k];
            dot = clamp_to_unit(dot);
            if (singular_diag && dot > 1.0 - 1e-15)
                throw std::runtime_error("discrete_energy: coincident points " +
                                         std::to_string(i) + " and " + std::to_string(j) +
                                         " make the energy singular");
            if (distance_kind)
                sum += f(geodesic_distance_ptr(xi, xj, dim));
            else
                sum += spec.value(dot, ctx);
        }
    }
    return sum;
}

double measure_energy(const MeasureSpec& mu, const PotentialSpec& spec, const SphereContext& ctx) {
    spec.validate();
    switch (mu.kind) {
    case MeasureSpec::Kind::Uniform:
        return uniform_energy(ctx, spec);
    case MeasureSpec::Kind::TwoPoint: {
        double at_one = spec.finite_at_one()
                            ? spec.value(1.0, ctx)
                            : std::numeric_limits<double>::infinity();
        return 0.5 * (at_one + spec.value(-1.0, ctx));
    }
    case MeasureSpec::Kind::PerturbedHarmonic:
        return uniform_energy(ctx, spec) +
               mu.amplitude * mu.amplitude * gegenbauer_coefficient(spec, mu.degree, ctx);
    case MeasureSpec::Kind::Discrete: {
        if (!spec.finite_at_one())
            throw std::invalid_argument(
                "measure_energy: diagonal terms diverge for this potential; "
                "use discrete_energy for the diagonal-free sum");
        if (mu.points.d != ctx.d)
            throw std::invalid_argument("measure_energy: point set dimension mismatch");
        double n = mu.points.size();
        return (n * spec.value(1.0, ctx) + 2.0 * discrete_energy(mu.points, spec)) / (n * n);
    }
    }
    throw std::logic_error("measure_energy: unknown measure kind");
}

double spectral_moment(const PointSet& z, int n, const SphereContext& ctx) {
    if (z.d != ctx.d)
        throw std::invalid_argument("spectral_moment: dimension mismatch");
    int N = z.size();
    const int dim = z.d + 1;
    const double* c = z.coords.data();
    double off = 0.0;
    for (int i = 0; i < N; ++i) {
        const double* xi = c + static_cast<std::size_t>(i) * dim;
        for (int j = i + 1; j < N; ++j) {
            const double* xj = c + static_cast<std::size_t>(j) * dim;
            double dot = 0.0;
            for (int k = 0; k < dim; ++k)
                dot += xi[k] * xj[k];
            off += zonal_eval(n, ctx, clamp_to_unit(dot));
        }
    }
    double diag = static_cast<double>(N) * harmonic_dim(n, ctx);
    return (2.0 * off + diag) / (static_cast<double>(N) * N);
}

std::vector<double> spectral_moments(const PointSet& z, const SphereContext& ctx, int K) {
    if (z.d != ctx.d)
        throw std::invalid_argument("spectral_moments: dimension mismatch");
    int N = z.size();
    const int dim = z.d + 1;
    const double* c = z.coords.data();
    const double lambda = ctx.lambda;
    const bool circle = ctx.is_circle();
    std::vector<double> sums(static_cast<std::size_t>(K) + 1, 0.0); // sum over i<j of R_k
    for (int i = 0; i < N; ++i) {
        const double* xi = c + static_cast<std::size_t>(i) * dim;
        for (int j = i + 1; j < N; ++j) {
            const double* xj = c + static_cast<std::size_t>(j) * dim;
            double t = 0.0;
            for (int k = 0; k < dim; ++k)
                t += xi[k] * xj[k];
            t = clamp_to_unit(t);
            // normalized recurrence inline (Chebyshev when d = 1)
            double rm1 = 1.0, r = t;
            sums[0] += 1.0;
            if (K >= 1)
                sums[1] += r;
            if (circle) {
                for (int k = 2; k <= K; ++k) {
                    double next = 2.0 * t * r - rm1;
                    rm1 = r;
                    r = next;
                    sums[static_cast<std::size_t>(k)] += r;
                }
            } else {
                for (int k = 2; k <= K; ++k) {
                    double next =
                        (2.0 * (k + lambda - 1.0) * t * r - (k - 1.0) * rm1) /
                        (k + 2.0 * lambda - 1.0);
                    rm1 = r;
                    r = next;
                    sums[static_cast<std::size_t>(k)] += r;
                }
            }
        }
    }
    std::vector<double> moments(static_cast<std::size_t>(K) + 1);
    double n2 = static_cast<double>(N) * N;
    for (int k = 0; k <= K; ++k) {
        double dim_k = harmonic_dim(k, ctx);
        moments[static_cast<std::size_t>(k)] =
            dim_k * (2.0 * sums[static_cast<std::size_t>(k)] + N) / n2;
    }
    return moments;
}

} // namespace georiesz
