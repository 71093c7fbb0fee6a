#ifndef GEORIESZ_QUADRATURE_HPP
#define GEORIESZ_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "georiesz/sphere.hpp"

namespace georiesz {

/// Gauss rule for the ultraspherical weight w_lambda(t) = (1-t^2)^{lambda-1/2}
/// on (-1, 1): integrates polynomials of degree <= 2m-1 exactly and
/// sum(weights) = sqrt(pi) Gamma(lambda+1/2)/Gamma(lambda+1).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lambda = 0.5;
    int order = 0; // node count m
};

/// Golub-Welsch construction for the general Jacobi weight
/// (1-x)^alpha (1+x)^beta, alpha, beta > -1.
QuadratureRule gauss_jacobi_general(double alpha, double beta, int m);

/// Rule for the ultraspherical weight w_lambda (alpha = beta = lambda - 1/2).
QuadratureRule gauss_jacobi_rule(double lambda, int m);

/// Gauss-Legendre rule on [-1, 1] (lambda = 1/2 specialization).
QuadratureRule gauss_legendre_rule(int m);

/// Newton-iteration Gauss-Legendre construction, O(m^2): preferred over the
/// eigenvalue route when m runs into the thousands.
QuadratureRule gauss_legendre_newton(int m);

/// Quadrature estimate of int_{-1}^{1} f(t) w_lambda(t) dt with m nodes.
double integrate_weighted(const std::function<double(double)>& f, double lambda, int m);

struct ThetaIntegralOptions {
    double abs_tol = 1e-12;
    int max_depth = 60;          // geometric halving levels toward theta = 0
    int panel_nodes = 32;        // Gauss-Legendre nodes per smooth sub-panel
    int oscillation_degree = 0;  // highest polynomial degree in cos(theta) under the integral
    double singular_power = 0.0; // p in g(theta) ~ theta^p * smooth near 0 (0 for smooth/log)
};

struct ThetaIntegral {
    double value = 0.0;
    double abs_err = 0.0;
    int depth = 0;
    bool converged = false;
};

/// Integral of g over (0, pi] for endpoint-singular integrands
/// g(theta) = theta^p * h(theta) with h bounded.  Panels are graded
/// geometrically toward 0 with ratio 1/2 (each panel split further so
/// oscillations of degree `oscillation_degree` stay resolved); descent stops
/// once a level's contribution falls below the tolerance, and the remaining
/// cap [0, a] is closed with a theta^p-weighted Gauss rule applied to h
/// (plain Gauss-Legendre when p = 0).
ThetaIntegral integrate_theta_graded(const std::function<double(double)>& g,
                                     const ThetaIntegralOptions& opt);

/// Spec'd front end: validates delta > -(2*lambda+1) against the context and
/// throws on non-convergence (the exception message carries the partial
/// estimate).  `delta` doubles as the grading exponent.
double integrate_theta_singular(const std::function<double(double)>& g, double delta,
                                const SphereContext& ctx, double abs_tol = 1e-12,
                                int oscillation_degree = 0);

/// Composite Gauss-Legendre on [a, b] with sub-panels sized to resolve
/// oscillations of the given polynomial degree (no endpoint singularity).
double integrate_smooth(const std::function<double(double)>& g, double a, double b,
                        int oscillation_degree = 0, int panel_nodes = 32);

} // namespace georiesz

#endif
