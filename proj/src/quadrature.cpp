#include "georiesz/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace georiesz {

namespace {

// Recurrence coefficients for the monic Jacobi polynomials with weight
// (1-x)^alpha (1+x)^beta (Gautschi's r_jacobi):
//   diag  a_0 = (b-a)/(a+b+2),  a_k = (b^2-a^2)/((2k+a+b)(2k+a+b+2))
//   offd  b_1 = 4(a+1)(b+1)/((a+b+2)^2 (a+b+3))
//         b_k = 4k(k+a)(k+b)(k+a+b)/((2k+a+b)^2 (2k+a+b+1)(2k+a+b-1))
// and total mass mu0 = 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2).
struct JacobiRecurrence {
    Eigen::VectorXd diag;
    Eigen::VectorXd offdiag; // length m-1
    double mu0;
};

JacobiRecurrence jacobi_recurrence(double a, double b, int m) {
    JacobiRecurrence rec;
    rec.diag.resize(m);
    rec.offdiag.resize(m > 1 ? m - 1 : 0);
    rec.mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                       std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    rec.diag[0] = (b - a) / (a + b + 2.0);
    for (int k = 1; k < m; ++k) {
        double s = 2.0 * k + a + b;
        rec.diag[k] = (b * b - a * a) / (s * (s + 2.0));
        double bk;
        if (k == 1)
            bk = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
        else
            bk = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        rec.offdiag[k - 1] = std::sqrt(bk);
    }
    return rec;
}

} // namespace

QuadratureRule gauss_jacobi_general(double alpha, double beta, int m) {
    if (m < 1)
        throw std::domain_error("gauss_jacobi_general: node count must be >= 1");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::domain_error("gauss_jacobi_general: weight exponents must exceed -1");
    JacobiRecurrence rec = jacobi_recurrence(alpha, beta, m);

    QuadratureRule rule;
    rule.order = m;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    if (m == 1) {
        rule.nodes[0] = rec.diag[0];
        rule.weights[0] = rec.mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(rec.diag, rec.offdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gauss_jacobi_general: eigen-solve failed for m=" +
                                 std::to_string(m) + " alpha=" + std::to_string(alpha) +
                                 " beta=" + std::to_string(beta));
    for (int j = 0; j < m; ++j) {
        rule.nodes[j] = solver.eigenvalues()[j];
        double v = solver.eigenvectors()(0, j);
        rule.weights[j] = rec.mu0 * v * v;
    }
    return rule;
}

QuadratureRule gauss_jacobi_rule(double lambda, int m) {
    if (lambda < 0.0)
        throw std::domain_error("gauss_jacobi_rule: lambda must be >= 0");
    QuadratureRule rule = gauss_jacobi_general(lambda - 0.5, lambda - 0.5, m);
    rule.lambda = lambda;
    return rule;
}

QuadratureRule gauss_legendre_rule(int m) { return gauss_jacobi_rule(0.5, m); }

QuadratureRule gauss_legendre_newton(int m) {
    if (m < 1)
        throw std::domain_error("gauss_legendre_newton: node count must be >= 1");
    QuadratureRule rule;
    rule.order = m;
    rule.lambda = 0.5;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double pi = std::numbers::pi;
    int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on the Legendre recurrence.
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[m - 1 - i] = x;
        rule.nodes[i] = -x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1)
        rule.nodes[half - 1] = 0.0;
    return rule;
}

double integrate_weighted(const std::function<double(double)>& f, double lambda, int m) {
    QuadratureRule rule = gauss_jacobi_rule(lambda, m);
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
        sum += rule.weights[j] * f(rule.nodes[j]);
    return sum;
}

namespace {

const QuadratureRule& cached_legendre(int m) {
    static std::mutex mtx;
    static std::unordered_map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it == cache.end())
        it = cache.emplace(m, gauss_legendre_rule(m)).first;
    return it->second;
}

double panel_gl(const std::function<double(double)>& g, double a, double b,
                const QuadratureRule& rule) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int j = 0; j < rule.order; ++j)
        sum += rule.weights[j] * g(mid + half * rule.nodes[j]);
    return half * sum;
}

double composite_gl(const std::function<double(double)>& g, double a, double b, int degree,
                    const QuadratureRule& rule) {
    // One 32-node panel per ~8 radians of phase keeps oscillating
    // polynomials of the given degree spectrally resolved.
    int panels = std::max(1, static_cast<int>(std::ceil((b - a) * std::max(1, degree) / 8.0)));
    double sum = 0.0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        sum += panel_gl(g, a + p * w, a + (p + 1) * w, rule);
    return sum;
}

// Closes the remaining cap [0, a]: a theta^p-weighted Gauss rule applied to
// h = g * theta^{-p} when p != 0, otherwise plain Gauss-Legendre on g.
double cap_closure(const std::function<double(double)>& g, double a, double p, int m) {
    if (p == 0.0)
        return panel_gl(g, 0.0, a, cached_legendre(m));
    QuadratureRule rule = gauss_jacobi_general(0.0, p, m);
    double scale = std::pow(0.5 * a, p + 1.0);
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
        double theta = 0.5 * a * (1.0 + rule.nodes[j]);
        sum += rule.weights[j] * g(theta) * std::pow(theta, -p);
    }
    return scale * sum;
}

} // namespace

double integrate_smooth(const std::function<double(double)>& g, double a, double b,
                        int oscillation_degree, int panel_nodes) {
    if (b <= a)
        return 0.0;
    return composite_gl(g, a, b, oscillation_degree, cached_legendre(panel_nodes));
}

ThetaIntegral integrate_theta_graded(const std::function<double(double)>& g,
                                     const ThetaIntegralOptions& opt) {
    if (opt.singular_power <= -1.0)
        throw std::domain_error("integrate_theta_graded: singular power must exceed -1");
    const QuadratureRule& gl = cached_legendre(opt.panel_nodes);
    const double pi = std::numbers::pi;

    ThetaIntegral res;
    double a = pi;
    double last = 0.0;
    for (int depth = 0; depth < opt.max_depth; ++depth) {
        double b = 0.5 * a;
        last = composite_gl(g, b, a, opt.oscillation_degree, gl);
        res.value += last;
        a = b;
        res.depth = depth + 1;

        double thr = 0.25 * opt.abs_tol * std::max(1.0, std::abs(res.value));
        bool oscillation_resolved = a * std::max(1, opt.oscillation_degree) <= 8.0;
        if (depth < 4 || !oscillation_resolved)
            continue;

        double cap = cap_closure(g, a, opt.singular_power, opt.panel_nodes);
        double cap_check = cap_closure(g, a, opt.singular_power, opt.panel_nodes / 2);
        double cap_err = std::abs(cap - cap_check);
        if (cap_err < 0.5 * opt.abs_tol || std::abs(last) < thr) {
            res.value += cap;
            res.abs_err = cap_err + std::abs(res.value) * 1e-15;
            res.converged = true;
            return res;
        }
    }
    // Depth exhausted: close anyway and report the partial estimate.
    double cap = cap_closure(g, a, opt.singular_power, opt.panel_nodes);
    res.value += cap;
    res.abs_err = std::abs(last) + std::abs(cap);
    res.converged = false;
    return res;
}

double integrate_theta_singular(const std::function<double(double)>& g, double delta,
                                const SphereContext& ctx, double abs_tol,
                                int oscillation_degree) {
    if (delta <= -(2.0 * ctx.lambda + 1.0))
        throw std::domain_error("integrate_theta_singular: delta must exceed -(2*lambda+1)");
    ThetaIntegralOptions opt;
    opt.abs_tol = abs_tol;
    opt.oscillation_degree = oscillation_degree;
    // For delta <= -1 the theta^delta weight alone is not integrable; the
    // bounded-h contract then guarantees the additional sin^{2*lambda} decay,
    // so the cap is closed by plain descent instead of a weighted rule.
    opt.singular_power = delta > -0.99 ? delta : 0.0;
    ThetaIntegral res = integrate_theta_graded(g, opt);
    if (!res.converged)
        throw std::runtime_error("integrate_theta_singular: no convergence after " +
                                 std::to_string(res.depth) +
                                 " levels; partial estimate " + std::to_string(res.value));
    return res.value;
}

} // namespace georiesz
