#include <doctest.h>

#include <cmath>
#include <numbers>

#include "georiesz/quadrature.hpp"
#include "georiesz/specfun.hpp"

using namespace georiesz;

namespace {
constexpr double kPi = std::numbers::pi;

// int_{-1}^1 t^k w_lambda dt = B((k+1)/2, lambda+1/2) for even k, 0 for odd
double monomial_moment(int k, double lambda) {
    if (k % 2 == 1)
        return 0.0;
    return std::exp(std::lgamma(0.5 * (k + 1)) + std::lgamma(lambda + 0.5) -
                    std::lgamma(0.5 * k + lambda + 1.0));
}
} // namespace

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("total mass of the ultraspherical weight") {
    for (int m : {1, 4, 9}) {
        double sum0 = 0.0;
        for (double w : gauss_jacobi_rule(0.0, m).weights)
            sum0 += w;
        CHECK(sum0 == doctest::Approx(kPi).epsilon(1e-13));
        double sum1 = 0.0;
        for (double w : gauss_jacobi_rule(0.5, m).weights)
            sum1 += w;
        CHECK(sum1 == doctest::Approx(2.0).epsilon(1e-13));
    }
    double sum = 0.0;
    for (double w : gauss_jacobi_rule(2.0, 6).weights)
        sum += w;
    CHECK(sum == doctest::Approx(std::sqrt(kPi) * std::exp(std::lgamma(2.5) - std::lgamma(3.0)))
                     .epsilon(1e-13));
}

TEST_CASE("exactness up to degree 2m-1") {
    for (int m : {4, 16, 64}) {
        for (double lambda : {0.0, 0.5, 1.0, 2.5}) {
            QuadratureRule rule = gauss_jacobi_rule(lambda, m);
            for (int k = 0; k <= 2 * m - 1; ++k) {
                double got = 0.0;
                for (int j = 0; j < m; ++j)
                    got += rule.weights[j] * std::pow(rule.nodes[j], k);
                CHECK(std::abs(got - monomial_moment(k, lambda)) <= 1e-12 * (1.0 + std::abs(got)));
            }
        }
    }
}

TEST_CASE("integrate_weighted examples") {
    CHECK(integrate_weighted([](double) { return 1.0; }, 0.0, 12) ==
          doctest::Approx(kPi).epsilon(1e-13));
    CHECK(std::abs(integrate_weighted(
              [](double t) { return gegenbauer_normalized(2, 1.0, t); }, 1.0, 8)) < 1e-14);
    CHECK(integrate_weighted([](double t) { return std::acos(t); }, 0.5, 40) ==
          doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("doubling the node count is stable for smooth integrands") {
    double a = integrate_weighted([](double t) { return std::exp(t); }, 1.5, 24);
    double b = integrate_weighted([](double t) { return std::exp(t); }, 1.5, 48);
    CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("newton and eigenvalue legendre constructions coincide") {
    QuadratureRule a = gauss_legendre_rule(64);
    QuadratureRule b = gauss_legendre_newton(64);
    for (int j = 0; j < 64; ++j) {
        CHECK(std::abs(a.nodes[j] - b.nodes[j]) < 1e-13);
        CHECK(std::abs(a.weights[j] - b.weights[j]) < 1e-13);
    }
}

TEST_CASE("graded theta integration: spec examples") {
    SphereContext s2(2);
    CHECK(integrate_theta_singular([](double th) { return th * std::sin(th); }, 1.0, s2) ==
          doctest::Approx(kPi).epsilon(1e-12));
    CHECK(integrate_theta_singular([](double th) { return std::sin(th); }, 0.0, s2) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("graded theta integration matches plain Gauss-Legendre when smooth") {
    SphereContext s2(2);
    auto g = [](double th) { return std::cos(3.0 * th) * std::sin(th); };
    double graded = integrate_theta_singular(g, 0.0, s2, 1e-12, 4);
    double plain = integrate_smooth(g, 0.0, kPi, 4);
    CHECK(std::abs(graded - plain) < 1e-12);
}

TEST_CASE("inverse square root singularity against a brute-force oracle") {
    // 10^7-panel trapezoid with the (integrable) endpoint handled by its
    // analytic sqrt primitive on the first sliver
    auto g = [](double th) { return std::sin(th) / std::sqrt(th); };
    const int M = 10000000;
    double h = kPi / M;
    long double acc = 0.0L;
    for (int i = 1; i < M; ++i)
        acc += g(i * h);
    // trapezoid over [h, pi] plus the analytic (2/3) h^{3/2} sliver at zero
    long double oracle = (acc - 0.5L * g(h) + 0.5L * g(kPi)) * h +
                         (2.0L / 3.0L) * std::pow((long double)h, 1.5L);
    SphereContext s2(2);
    double graded = integrate_theta_singular(g, -0.5, s2);
    CHECK(std::abs(graded - (double)oracle) < 1e-9);
}

TEST_CASE("non-convergence carries a partial estimate") {
    ThetaIntegralOptions opt;
    opt.max_depth = 3; // too shallow on purpose
    opt.singular_power = -0.5;
    ThetaIntegral res =
        integrate_theta_graded([](double th) { return std::sin(th) / std::sqrt(th); }, opt);
    CHECK_FALSE(res.converged);
    CHECK(res.value > 0.0);
    SphereContext s1(1);
    CHECK_THROWS_AS(integrate_theta_singular([](double) { return 1.0; }, -1.5, s1),
                    std::domain_error);
}

TEST_SUITE_END();
