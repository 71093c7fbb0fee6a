#include <doctest.h>

#include <cmath>
#include <numbers>

#include "georiesz/discrepancy.hpp"

using namespace georiesz;

namespace {
constexpr double kPi = std::numbers::pi;

PointSet north_pole() {
    PointSet z(2, 1);
    z.point(0)[2] = 1.0;
    return z;
}
} // namespace

TEST_SUITE_BEGIN("discrepancy");

TEST_CASE("spectral discrepancy of a single point exhausts the table") {
    SphereContext s2(2);
    auto spec = PotentialSpec::spectral({0.3, 0.25, 0.1, 0.02});
    CoefficientTable table = coefficient_table(spec, s2, 3);
    SpectralDiscrepancy d = l2_discrepancy_spectral(north_pole(), table);
    // sum_{k>=1} F^(k) a_k = F(1) - F^(0)
    double expect = spec.value(1.0, s2) - 0.3;
    CHECK(d.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(d.tail_bound == 0.0);
}

TEST_CASE("antipodal pair kills the degree-one mode") {
    SphereContext s2(2);
    auto spec = PotentialSpec::spectral({0.0, 1.0});
    CoefficientTable table = coefficient_table(spec, s2, 1);
    PointSet pair(2, 2);
    pair.point(0)[2] = 1.0;
    pair.point(1)[2] = -1.0;
    CHECK(l2_discrepancy_spectral(pair, table).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("negative table entries are rejected") {
    SphereContext s2(2);
    CoefficientTable bad = coefficient_table(PotentialSpec::spectral({0.0, 0.5, -0.5}), s2, 2);
    CHECK_THROWS_AS(l2_discrepancy_spectral(north_pole(), bad), std::runtime_error);
    CHECK_THROWS_AS(make_positive_definite(PotentialSpec::geodesic(-1.0, 0.0), s2, 16),
                    std::domain_error);
    CHECK_THROWS_AS(make_positive_definite(PotentialSpec::cap(0.2), s2, 16), std::domain_error);
}

TEST_CASE("invariance identity is exact for finite spectral potentials") {
    SphereContext s2(2);
    auto spec = PotentialSpec::spectral({0.2, 0.5, 0.25, 0.05, 0.01});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        PointSet z = generate(PointSetKind::RandomUniform, 20, s2, seed);
        StolarskyReport rep = stolarsky_check(z, spec, s2, 4);
        CHECK(rep.residual < 1e-10);
        CHECK(rep.truncation_bound == 0.0);
    }
}

TEST_CASE("invariance identity with certified truncation") {
    SphereContext s2(2);
    PointSet z = generate(PointSetKind::RandomUniform, 32, s2, 11);
    StolarskyReport rep = stolarsky_check(z, PotentialSpec::geodesic(0.5), s2, 4096);
    CHECK(rep.residual <= rep.truncation_bound + rep.numerical_slack);
    CHECK(rep.d_squared >= 0.0);
    // the identity seen from the energy side: lhs = I + D^2
    CHECK(rep.lhs == doctest::Approx(rep.i_sigma + rep.d_squared)
                         .epsilon(2 * (rep.truncation_bound + rep.numerical_slack) /
                                  std::max(1e-12, rep.lhs)));
}

TEST_CASE("equal spacing on the circle: closed-form discrepancy") {
    SphereContext s1(1);
    // For F = pi/2 - rho on S^1 the coefficients are 2/(pi k^2) at odd k, so
    // N equally spaced points give D^2 = 0 for even N and pi/(2N^2) for odd.
    PointSet even = generate(PointSetKind::EqualSpacedCircle, 32, s1, 0);
    StolarskyReport rep_even = stolarsky_check(even, PotentialSpec::geodesic(1.0), s1, 4096);
    CHECK(rep_even.residual < 1e-8);
    CHECK(rep_even.d_squared < 1e-8);

    // For odd N the modes at odd multiples of N contribute pi/(2 N^2); the
    // retained part misses only the k > K tail (~2e-6 at this K).
    PointSet odd = generate(PointSetKind::EqualSpacedCircle, 33, s1, 0);
    StolarskyReport rep_odd = stolarsky_check(odd, PotentialSpec::geodesic(1.0), s1, 8192);
    CHECK(rep_odd.residual <= rep_odd.truncation_bound + rep_odd.numerical_slack);
    CHECK(rep_odd.d_squared == doctest::Approx(kPi / (2.0 * 33.0 * 33.0)).epsilon(5e-3));
    CHECK(rep_odd.lhs - rep_odd.i_sigma ==
          doctest::Approx(kPi / (2.0 * 33.0 * 33.0)).epsilon(1e-9));
}

TEST_CASE("discrepancy scales linearly with the potential") {
    SphereContext s2(2);
    PointSet z = generate(PointSetKind::Fibonacci, 64, s2, 0);
    CoefficientTable table = coefficient_table(PotentialSpec::spectral({0.1, 0.3, 0.2, 0.1}), s2, 3);
    double base = l2_discrepancy_spectral(z, table).value;
    for (double& v : table.values)
        v *= 5.0;
    CHECK(l2_discrepancy_spectral(z, table).value == doctest::Approx(5.0 * base).epsilon(1e-12));
}

TEST_CASE("cap discrepancy of one point is exactly one third") {
    SphereContext s2(2);
    PointSet z = north_pole();
    CapDiscrepancy sp = cap_discrepancy(z, s2, CapMethod::Spectral, 0, 0, 4096);
    CHECK(std::abs(sp.value - 1.0 / 3.0) < 1e-3 * (1.0 / 3.0));
    CapDiscrepancy mc = cap_discrepancy(z, s2, CapMethod::MonteCarlo, 200000, 17);
    CHECK(std::abs(mc.value - 1.0 / 3.0) <= 3.0 * mc.error);
}

TEST_CASE("cap methods agree on uniform random clouds") {
    SphereContext s2(2);
    PointSet z = generate(PointSetKind::RandomUniform, 512, s2, 31);
    CapDiscrepancy sp = cap_discrepancy(z, s2, CapMethod::Spectral, 0, 0, 1024);
    CapDiscrepancy mc = cap_discrepancy(z, s2, CapMethod::MonteCarlo, 300000, 23);
    CHECK(std::abs(sp.value - mc.value) <= 3.0 * (sp.error + mc.error));
    // random clouds sit at the 1/(3N) law
    CHECK(sp.value * 512.0 == doctest::Approx(1.0 / 3.0).epsilon(0.2));

    CapDiscrepancy eu = cap_discrepancy(z, s2, CapMethod::EuclideanOracle);
    CHECK(std::abs(eu.value - sp.value) <= 0.03 * sp.value);
}

TEST_CASE("well-separated sets beat random by the predicted rate") {
    SphereContext s2(2);
    std::vector<double> ns, ds;
    for (int n : {64, 128, 256, 512}) {
        PointSet z = generate(PointSetKind::Fibonacci, n, s2, 0);
        ds.push_back(cap_discrepancy(z, s2, CapMethod::Spectral, 0, 0, 1024).value);
        ns.push_back(n);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double lx = std::log(ns[i]), ly = std::log(ds[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double slope = (ns.size() * sxy - sx * sy) / (ns.size() * sxx - sx * sx);
    CHECK(std::abs(slope - (-1.5)) < 0.2);
}

TEST_CASE("negative exponents: discrete mean dominates up to the diagonal correction") {
    // N^{-2} sum sum F = D^2 + I >= I, so 2E/N^2 >= I - F(1)/N.
    SphereContext s2(2);
    auto spec = PotentialSpec::geodesic(-1.0, 0.2);
    double i_sigma = uniform_energy(s2, spec);
    for (std::uint64_t seed : {1u, 2u, 9u}) {
        for (int n : {16, 64, 256}) {
            PointSet z = generate(PointSetKind::RandomUniform, n, s2, seed * 100 + n);
            double mean2 = 2.0 * discrete_energy(z, spec) / (static_cast<double>(n) * n);
            CHECK(mean2 >= i_sigma - spec.value(1.0, s2) / n - 1e-12);
        }
    }
}

TEST_CASE("circle sanity: equal spacing beats random") {
    SphereContext s1(1);
    PositiveDefinitePotential pd = make_positive_definite(PotentialSpec::geodesic(1.0), s1, 2048);
    PointSet eq = generate(PointSetKind::EqualSpacedCircle, 1024, s1, 0);
    PointSet rnd = generate(PointSetKind::RandomUniform, 1024, s1, 5);
    double d_eq = l2_discrepancy_spectral(eq, pd.table).value;
    double d_rnd = l2_discrepancy_spectral(rnd, pd.table).value;
    CHECK(d_eq < 0.1 * d_rnd);
}

TEST_CASE("bound expressions bracket the measured discrepancy") {
    SphereContext s2(2);
    PositiveDefinitePotential pd = make_positive_definite(PotentialSpec::geodesic(0.5), s2, 512);
    BoundsReport rep = discrepancy_bounds_check(pd, 256, 150, 7);
    CHECK(rep.measured > 0.0);
    CHECK(rep.lower_expr <= rep.measured * 20.0);
    CHECK(rep.measured <= rep.upper_expr * 20.0);
    CHECK(rep.measured >= 0.05 * rep.lower_expr);
    MESSAGE("bounds: lower ", rep.lower_expr, " measured ", rep.measured, " upper ",
            rep.upper_expr);
}

TEST_CASE("smoothed point fields stay separated from the constant") {
    SphereContext s2(2);
    for (int n : {16, 64}) {
        for (auto kind : {PointSetKind::Fibonacci, PointSetKind::RandomUniform}) {
            PointSet z = generate(kind, n, s2, 3);
            CHECK(cesaro_separation(z, s2, 2.0) > 1e-3);
        }
    }
}

TEST_SUITE_END();
