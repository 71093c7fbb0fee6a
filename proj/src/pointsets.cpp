#include "georiesz/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "georiesz/rng.hpp"

namespace georiesz {

namespace {

constexpr double kPi = std::numbers::pi;

PointSet random_uniform(int N, const SphereContext& ctx, std::uint64_t seed) {
    Rng rng(seed);
    PointSet z(ctx.d, N);
    for (int i = 0; i < N; ++i) {
        std::vector<double> x = rng.unit_vector(ctx.d);
        std::copy(x.begin(), x.end(), z.point(i).begin());
    }
    return z;
}

PointSet fibonacci_sphere(int N) {
    // Golden-angle spiral: equal-area latitudes, phi advancing by the golden
    // angle 2 pi (1 - 1/phi).
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    PointSet z(2, N);
    for (int i = 0; i < N; ++i) {
        double h = 1.0 - (2.0 * i + 1.0) / N;
        double r = std::sqrt(std::max(0.0, 1.0 - h * h));
        double phi = golden_angle * i;
        auto p = z.point(i);
        p[0] = r * std::cos(phi);
        p[1] = r * std::sin(phi);
        p[2] = h;
    }
    return z;
}

PointSet equal_spaced_circle(int N) {
    PointSet z(1, N);
    for (int i = 0; i < N; ++i) {
        double a = 2.0 * kPi * i / N;
        auto p = z.point(i);
        p[0] = std::cos(a);
        p[1] = std::sin(a);
    }
    return z;
}

// Geodesic distance between colatitude/longitude pairs.
double sphere_dist(double th1, double ph1, double th2, double ph2) {
    double dot = std::cos(th1) * std::cos(th2) +
                 std::sin(th1) * std::sin(th2) * std::cos(ph1 - ph2);
    return std::acos(clamp_to_unit(dot));
}

} // namespace

EqualAreaPartition equal_area_partition(int N, const SphereContext& ctx) {
    if (N < 1)
        throw std::domain_error("equal_area_partition: N must be >= 1");
    if (ctx.d > 2)
        throw std::domain_error("equal_area_partition: implemented for d <= 2");
    EqualAreaPartition part{ctx, {}, 0.0};
    part.cells.reserve(static_cast<std::size_t>(N));

    if (ctx.d == 1) {
        double arc = 2.0 * kPi / N;
        for (int i = 0; i < N; ++i) {
            double a = arc * (i + 0.5);
            PartitionCell cell;
            cell.center = {std::cos(a), std::sin(a)};
            cell.area = 1.0 / N;
            cell.diameter_bound = std::min(arc, kPi);
            part.cells.push_back(std::move(cell));
        }
        part.max_diameter = std::min(arc, kPi);
        return part;
    }

    // Bands of equal colatitude pitch ~ pi/B, cell counts by largest-remainder
    // rounding, then band boundaries reset to the cumulative z-heights so
    // every cell has measure exactly 1/N.
    int bands = std::max(1, static_cast<int>(std::lround(std::sqrt(N * kPi) / 2.0)));
    std::vector<double> quota(static_cast<std::size_t>(bands));
    std::vector<int> m(static_cast<std::size_t>(bands), 0);
    for (int b = 0; b < bands; ++b) {
        double th0 = kPi * b / bands, th1 = kPi * (b + 1) / bands;
        quota[static_cast<std::size_t>(b)] = 0.5 * (std::cos(th0) - std::cos(th1)) * N;
        m[static_cast<std::size_t>(b)] = static_cast<int>(std::floor(quota[static_cast<std::size_t>(b)]));
    }
    int assigned = 0;
    for (int v : m)
        assigned += v;
    std::vector<int> order(static_cast<std::size_t>(bands));
    for (int b = 0; b < bands; ++b)
        order[static_cast<std::size_t>(b)] = b;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        double ra = quota[static_cast<std::size_t>(a)] - std::floor(quota[static_cast<std::size_t>(a)]);
        double rb = quota[static_cast<std::size_t>(b)] - std::floor(quota[static_cast<std::size_t>(b)]);
        return ra > rb;
    });
    for (int i = 0; assigned < N; ++i, ++assigned)
        m[static_cast<std::size_t>(order[static_cast<std::size_t>(i % bands)])] += 1;

    double z_hi = 1.0;
    int used = 0;
    for (int b = 0; b < bands; ++b) {
        int mk = m[static_cast<std::size_t>(b)];
        if (mk == 0)
            continue;
        used += mk;
        double z_lo = 1.0 - 2.0 * used / static_cast<double>(N);
        if (b == bands - 1)
            z_lo = -1.0; // guard rounding
        double th_hi = std::acos(clamp_to_unit(z_hi));
        double th_lo = std::acos(clamp_to_unit(z_lo));
        double dphi = 2.0 * kPi / mk;
        double offset = (b % 2 == 1) ? 0.5 * dphi : 0.0;

        // Exact cell diameter for a z-rectangle: attained among corner pairs
        // (the full-width separation for mk <= 2).
        double u = mk == 1 ? kPi : dphi;
        double diam = th_lo - th_hi;
        diam = std::max(diam, sphere_dist(th_hi, 0.0, th_lo, u));
        diam = std::max(diam, sphere_dist(th_hi, 0.0, th_hi, u));
        diam = std::max(diam, sphere_dist(th_lo, 0.0, th_lo, u));

        double zc = 0.5 * (z_hi + z_lo);
        double rc = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        for (int i = 0; i < mk; ++i) {
            double phi = offset + dphi * (i + 0.5);
            PartitionCell cell;
            cell.center = {rc * std::cos(phi), rc * std::sin(phi), zc};
            cell.area = 1.0 / N;
            cell.diameter_bound = diam;
            part.cells.push_back(std::move(cell));
        }
        part.max_diameter = std::max(part.max_diameter, diam);
        z_hi = z_lo;
    }
    return part;
}

PointSet generate(PointSetKind kind, int N, const SphereContext& ctx, std::uint64_t seed) {
    if (N < 1)
        throw std::domain_error("generate: N must be >= 1");
    switch (kind) {
    case PointSetKind::RandomUniform:
        return random_uniform(N, ctx, seed);
    case PointSetKind::Fibonacci:
        if (ctx.d != 2)
            throw std::domain_error("generate: fibonacci requires d = 2");
        return fibonacci_sphere(N);
    case PointSetKind::EqualSpacedCircle:
        if (ctx.d != 1)
            throw std::domain_error("generate: equal_spaced_circle requires d = 1");
        return equal_spaced_circle(N);
    case PointSetKind::EqualAreaCenters: {
        EqualAreaPartition part = equal_area_partition(N, ctx);
        PointSet z(ctx.d, N);
        for (int i = 0; i < N; ++i) {
            auto p = z.point(i);
            const auto& c = part.cells[static_cast<std::size_t>(i)].center;
            std::copy(c.begin(), c.end(), p.begin());
        }
        return z;
    }
    case PointSetKind::SymmetricRandom: {
        if (N % 2 != 0)
            throw std::domain_error("generate: symmetric_random requires even N");
        PointSet half = random_uniform(N / 2, ctx, seed);
        PointSet z(ctx.d, N);
        for (int i = 0; i < N / 2; ++i) {
            auto src = half.point(i);
            auto a = z.point(i);
            auto b = z.point(N / 2 + i);
            for (std::size_t k = 0; k < src.size(); ++k) {
                a[k] = src[k];
                b[k] = -src[k];
            }
        }
        return z;
    }
    }
    throw std::logic_error("generate: unknown kind");
}

// ---------------------------------------------------------------------------
// Projected gradient descent / ascent
// ---------------------------------------------------------------------------

namespace {

struct PairDerivative {
    bool log_kind;
    double delta, eps;

    explicit PairDerivative(const PotentialSpec& spec)
        : log_kind(spec.is_log()), delta(spec.delta), eps(spec.epsilon) {}

    double value(double rho) const {
        double r = eps + rho;
        if (log_kind)
            return std::log(kPi / r);
        if (delta == -1.0)
            return 1.0 / r;
        if (delta == 0.5)
            return std::sqrt(r);
        return std::pow(r, delta);
    }
    double slope(double rho) const {
        double r = eps + rho;
        if (log_kind)
            return -1.0 / r;
        if (delta == -1.0)
            return -1.0 / (r * r);
        if (delta == 0.5)
            return 0.5 / std::sqrt(r);
        return delta * std::pow(r, delta - 1.0);
    }
};

double pairwise_energy(const PointSet& z, const PairDerivative& f) {
    int n = z.size();
    const int dim = z.d + 1;
    const double* c = z.coords.data();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* xi = c + static_cast<std::size_t>(i) * dim;
        for (int j = i + 1; j < n; ++j)
            sum += f.value(geodesic_distance_ptr(xi, c + static_cast<std::size_t>(j) * dim, dim));
    }
    return sum;
}

// Euclidean pair gradients accumulated, then projected to each tangent
// space.  Throws when a pair sits inside the clamp margin while the
// derivative is singular there.
double pairwise_energy_gradient(const PointSet& z, const PairDerivative& f, double clamp_margin,
                                bool singular_at_zero, std::vector<double>& grad) {
    int n = z.size();
    const int dim = z.d + 1;
    const double* c = z.coords.data();
    grad.assign(z.coords.size(), 0.0);
    double energy = 0.0;
    const double t_max = 1.0 - clamp_margin;
    for (int i = 0; i < n; ++i) {
        const double* xi = c + static_cast<std::size_t>(i) * dim;
        for (int j = i + 1; j < n; ++j) {
            const double* xj = c + static_cast<std::size_t>(j) * dim;
            double dot = 0.0;
            for (int k = 0; k < dim; ++k)
                dot += xi[k] * xj[k];
            if (singular_at_zero && dot > t_max)
                throw std::runtime_error("optimize_energy: points " + std::to_string(i) + " and " +
                                         std::to_string(j) + " are closer than the clamp margin");
            double t = std::min(std::max(dot, -t_max), t_max);
            double rho = std::acos(t);
            energy += f.value(geodesic_distance_ptr(xi, xj, dim));
            double factor = -f.slope(rho) / std::sqrt(1.0 - t * t);
            double* gi = grad.data() + static_cast<std::size_t>(i) * dim;
            double* gj = grad.data() + static_cast<std::size_t>(j) * dim;
            for (int k = 0; k < dim; ++k) {
                gi[k] += factor * xj[k];
                gj[k] += factor * xi[k];
            }
        }
    }
    // tangent projection
    for (int i = 0; i < n; ++i) {
        const double* xi = c + static_cast<std::size_t>(i) * dim;
        double* gi = grad.data() + static_cast<std::size_t>(i) * dim;
        double proj = 0.0;
        for (int k = 0; k < dim; ++k)
            proj += gi[k] * xi[k];
        for (int k = 0; k < dim; ++k)
            gi[k] -= proj * xi[k];
    }
    return energy;
}

// Energy of point i against the rest, O(N).
double site_energy(const PointSet& z, int i, std::span<const double> xi,
                   const PairDerivative& f) {
    const int dim = z.d + 1;
    const double* c = z.coords.data();
    double sum = 0.0;
    for (int j = 0; j < z.size(); ++j) {
        if (j == i)
            continue;
        sum += f.value(
            geodesic_distance_ptr(xi.data(), c + static_cast<std::size_t>(j) * dim, dim));
    }
    return sum;
}

// Coordinate pattern search on the product of spheres: trial moves of radius
// r along a tangent frame at each point, radius halved when a full sweep
// yields no improvement.  Handles the cut-locus kinks that defeat gradient
// steps.  Returns the accumulated energy change (<= 0 in the h = sign*E
// convention).
double polish_pattern(PointSet& z, const PairDerivative& f, double sign, double radius,
                      int sweeps) {
    const int dim = z.d + 1;
    const int n = z.size();
    double gain = 0.0;
    std::vector<double> trial(static_cast<std::size_t>(dim));
    std::vector<double> save_i(static_cast<std::size_t>(dim)),
        save_j(static_cast<std::size_t>(dim));

    auto tangent_move = [&](std::span<const double> x, int axis, double amount,
                            std::span<double> out) {
        double proj = x[static_cast<std::size_t>(axis)];
        double norm2 = 1.0 - proj * proj;
        if (norm2 < 1e-14)
            return false;
        double inv = 1.0 / std::sqrt(norm2);
        double norm = 0.0;
        for (int k = 0; k < dim; ++k) {
            double ek = (k == axis ? 1.0 : 0.0) - proj * x[static_cast<std::size_t>(k)];
            out[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)] + amount * ek * inv;
            norm += out[static_cast<std::size_t>(k)] * out[static_cast<std::size_t>(k)];
        }
        norm = std::sqrt(norm);
        for (int k = 0; k < dim; ++k)
            out[static_cast<std::size_t>(k)] /= norm;
        return true;
    };

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        bool improved = false;
        // single-point moves
        for (int i = 0; i < n; ++i) {
            auto xi = z.point(i);
            double h_i = sign * site_energy(z, i, xi, f);
            for (int axis = 0; axis < dim; ++axis) {
                for (double dsign : {1.0, -1.0}) {
                    if (!tangent_move(xi, axis, dsign * radius, trial))
                        continue;
                    double h_t = sign * site_energy(z, i, trial, f);
                    if (std::isfinite(h_t) && h_t < h_i) {
                        gain += h_t - h_i;
                        h_i = h_t;
                        std::copy(trial.begin(), trial.end(), xi.begin());
                        improved = true;
                    }
                }
            }
        }
        // rigid dipole moves: the pair term of a near-antipodal pair has a
        // cut-locus kink that penalizes every single-point move linearly, so
        // the pair is moved as one antipode-locked unit.
        for (int i = 0; i < n; ++i) {
            auto xi = z.point(i);
            int j_best = -1;
            double dot_best = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                auto xj = z.point(j);
                double dot = 0.0;
                for (int k = 0; k < dim; ++k)
                    dot += xi[k] * xj[k];
                if (j_best < 0 || dot < dot_best) {
                    dot_best = dot;
                    j_best = j;
                }
            }
            if (j_best < 0 || dot_best > -0.99)
                continue;
            auto xj = z.point(j_best);
            std::copy(xi.begin(), xi.end(), save_i.begin());
            std::copy(xj.begin(), xj.end(), save_j.begin());
            double h_pair = sign * (site_energy(z, i, xi, f) + site_energy(z, j_best, xj, f) -
                                    f.value(geodesic_distance(xi, xj)));
            bool pair_improved = false;
            for (int axis = 0; axis < dim && !pair_improved; ++axis) {
                for (double dsign : {1.0, -1.0}) {
                    if (!tangent_move(save_i, axis, dsign * radius, trial))
                        continue;
                    for (int k = 0; k < dim; ++k) {
                        xi[static_cast<std::size_t>(k)] = trial[static_cast<std::size_t>(k)];
                        xj[static_cast<std::size_t>(k)] = -trial[static_cast<std::size_t>(k)];
                    }
                    double h_t = sign * (site_energy(z, i, xi, f) +
                                         site_energy(z, j_best, xj, f) -
                                         f.value(std::numbers::pi));
                    if (std::isfinite(h_t) && h_t < h_pair) {
                        gain += h_t - h_pair;
                        improved = true;
                        pair_improved = true;
                        break;
                    }
                    std::copy(save_i.begin(), save_i.end(), xi.begin());
                    std::copy(save_j.begin(), save_j.end(), xj.begin());
                }
            }
        }
        if (!improved) {
            radius *= 0.5;
            if (radius < 1e-10)
                break;
        }
    }
    return gain;
}

void retract_step(const PointSet& from, const std::vector<double>& dir, double step,
                  PointSet& into) {
    int n = from.size();
    const int dim = from.d + 1;
    for (int i = 0; i < n; ++i) {
        const double* x = from.coords.data() + static_cast<std::size_t>(i) * dim;
        const double* v = dir.data() + static_cast<std::size_t>(i) * dim;
        double* y = into.coords.data() + static_cast<std::size_t>(i) * dim;
        double norm2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            y[k] = x[k] + step * v[k];
            norm2 += y[k] * y[k];
        }
        double inv = 1.0 / std::sqrt(norm2);
        for (int k = 0; k < dim; ++k)
            y[k] *= inv;
    }
}

} // namespace

double energy_gradient(const PointSet& z, const PotentialSpec& spec, std::vector<double>& grad,
                       double clamp_margin) {
    spec.validate();
    if (!(spec.is_geodesic() || spec.is_log()))
        throw std::domain_error("energy_gradient: only geodesic and logarithmic potentials");
    PairDerivative f(spec);
    bool singular = spec.is_log() || spec.delta < 0.0;
    return pairwise_energy_gradient(z, f, clamp_margin, singular && spec.epsilon == 0.0, grad);
}

OptimizeReport optimize_energy(const PointSet& z0, const PotentialSpec& spec,
                               const OptimizerOptions& opts) {
    spec.validate();
    if (spec.is_geodesic() && spec.delta >= 1.0)
        throw std::domain_error("optimize_energy: geodesic exponent must lie below 1");
    if (!(spec.is_geodesic() || spec.is_log()))
        throw std::domain_error("optimize_energy: only geodesic and logarithmic potentials");
    z0.check_norms(1e-9);

    // Descend on sign * E: ascent (maximization) for delta in (0, 1).
    const double sign = (spec.is_geodesic() && spec.delta > 0.0) ? -1.0 : 1.0;
    const bool singular_at_zero = sign > 0.0; // delta < 0 and log blow up at rho -> 0
    PairDerivative f(spec);

    OptimizeReport rep;
    rep.points = z0;
    PointSet trial = z0;
    std::vector<double> grad;
    double energy =
        pairwise_energy_gradient(rep.points, f, opts.clamp_margin, singular_at_zero, grad);
    rep.energy_trace.push_back(energy);
    double h = sign * energy;
    double step = opts.initial_step;
    int stall_count = 0;

    bool done = false;
    for (int it = 0; it < opts.max_iterations && !done; ++it) {
        rep.iterations = it;
        // descent direction: -sign * grad
        double gnorm2 = 0.0, gmax2 = 0.0;
        for (std::size_t i = 0; i < grad.size(); i += static_cast<std::size_t>(z0.d) + 1) {
            double p2 = 0.0;
            for (int k = 0; k <= z0.d; ++k)
                p2 += grad[i + static_cast<std::size_t>(k)] * grad[i + static_cast<std::size_t>(k)];
            gnorm2 += p2;
            gmax2 = std::max(gmax2, p2);
        }
        rep.final_grad_norm = std::sqrt(gnorm2);
        if (rep.final_grad_norm <= opts.grad_tol) {
            rep.converged = true;
            break;
        }

        // cap the largest single-point displacement at 0.5 rad
        double s = std::min(step, 0.5 / std::max(std::sqrt(gmax2), 1e-300));
        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            std::vector<double> dir(grad.size());
            for (std::size_t k = 0; k < grad.size(); ++k)
                dir[k] = -sign * grad[k];
            retract_step(rep.points, dir, s, trial);
            double e_trial;
            try {
                e_trial = pairwise_energy(trial, f);
            } catch (...) {
                s *= opts.armijo_factor;
                continue;
            }
            double h_trial = sign * e_trial;
            if (std::isfinite(h_trial) && h_trial <= h - opts.armijo_constant * s * gnorm2) {
                double h_prev = h;
                rep.points.coords.swap(trial.coords);
                energy = e_trial;
                h = h_trial;
                rep.energy_trace.push_back(energy);
                step = s * opts.step_growth;
                accepted = true;
                if (opts.stall_tol > 0.0 &&
                    std::abs(h_prev - h) <= opts.stall_tol * std::max(1.0, std::abs(h)))
                    ++stall_count;
                else
                    stall_count = 0;
                break;
            }
            s *= opts.armijo_factor;
        }
        if (!accepted || stall_count >= 5) {
            // No further agreed descent within line-search resolution.
            rep.converged = true;
            rep.iterations = it + 1;
            break;
        }
        energy = pairwise_energy_gradient(rep.points, f, opts.clamp_margin, singular_at_zero, grad);
        h = sign * energy;
    }
    if (!rep.converged && rep.iterations >= opts.max_iterations - 1)
        rep.iterations = opts.max_iterations; // cap reached; best-so-far returned

    if (opts.polish_sweeps > 0) {
        double radius = opts.polish_radius > 0.0
                            ? opts.polish_radius
                            : std::min(0.05, kPi * std::pow(static_cast<double>(z0.size()),
                                                            -1.0 / z0.d) / 8.0);
        double gain = polish_pattern(rep.points, f, sign, radius, opts.polish_sweeps);
        if (gain < 0.0) {
            energy = pairwise_energy(rep.points, f);
            rep.energy_trace.push_back(energy);
        }
        pairwise_energy_gradient(rep.points, f, opts.clamp_margin, singular_at_zero, grad);
        double gnorm2 = 0.0;
        for (double g : grad)
            gnorm2 += g * g;
        rep.final_grad_norm = std::sqrt(gnorm2);
    }
    return rep;
}

} // namespace georiesz
