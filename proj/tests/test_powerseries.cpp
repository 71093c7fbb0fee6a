#include <doctest.h>

#include <cmath>
#include <numbers>

#include "georiesz/coefficients.hpp"
#include "georiesz/powerseries.hpp"

using namespace georiesz;

TEST_SUITE_BEGIN("powerseries");

TEST_CASE("arccos odd series coefficients") {
    PowerSeries a = arccos_series(17);
    CHECK(a[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(a[5] == doctest::Approx(3.0 / 40.0).epsilon(1e-15));
    for (int k = 0; k <= 16; k += 2)
        CHECK(a[k] == 0.0);
    for (int k = 1; k <= 17; k += 2)
        CHECK(a[k] > 0.0);
    // evaluates to pi/2 - arccos t
    for (double t : {-0.5, 0.0, 0.3}) {
        PowerSeries big = arccos_series(301);
        CHECK(big.evaluate(t) ==
              doctest::Approx(0.5 * std::numbers::pi - std::acos(t)).epsilon(1e-10));
    }
}

TEST_CASE("exponent one reproduces the arccos series exactly") {
    PowerSeries f = potential_series(PotentialSpec::geodesic(1.0, 0.0), 33);
    PowerSeries a = arccos_series(33);
    CHECK(f[0] == doctest::Approx(0.5 * std::numbers::pi).epsilon(1e-15));
    for (int k = 1; k <= 33; ++k)
        CHECK(f[k] == doctest::Approx(-a[k]).epsilon(1e-15));
}

TEST_CASE("sign structure of the expansion coefficients") {
    for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double eps : {0.0, 0.2, 0.5}) {
            PowerSeries f = potential_series(PotentialSpec::geodesic(delta, eps), 32);
            for (int k = 1; k <= 32; ++k)
                CHECK(f[k] < 0.0);
        }
    }
    for (double delta : {-0.5, -1.5}) {
        for (double eps : {0.0, 0.2, 0.5}) {
            PowerSeries f = potential_series(PotentialSpec::geodesic(delta, eps), 32);
            for (int k = 0; k <= 32; ++k)
                CHECK(f[k] > 0.0);
        }
    }
    for (double eps : {0.0, 0.2, 0.5}) {
        PowerSeries f = potential_series(PotentialSpec::logarithmic(eps), 32);
        for (int k = 1; k <= 32; ++k)
            CHECK(f[k] > 0.0);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PotentialSpec::geodesic(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(PotentialSpec::geodesic(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(potential_series(PotentialSpec::cap(0.3), 16), std::domain_error);
    CHECK_THROWS_AS(potential_series(PotentialSpec::geodesic(0.5), 1 << 17), std::runtime_error);
}

TEST_CASE("the convolution recurrence reproduces the composition") {
    for (auto spec : {PotentialSpec::geodesic(0.5, 0.2), PotentialSpec::geodesic(-1.3, 0.0),
                      PotentialSpec::logarithmic(0.1)}) {
        PowerSeries a = potential_series(spec, 160);
        PowerSeries b = potential_series_ode(spec, 160);
        for (int k = 0; k <= 160; ++k)
            CHECK(std::abs(a[k] - b[k]) <= 1e-13 * std::max(1.0, std::abs(a[k])));
    }
}

TEST_CASE("moment sign pattern") {
    for (double lambda : {0.5, 1.0, 2.0}) {
        SphereContext ctx(static_cast<int>(2 * lambda) + 1);
        REQUIRE(ctx.lambda == lambda);
        for (int n = 0; n <= 12; ++n) {
            for (int k = 0; k <= 12; ++k) {
                double m = moment_integral(k, n, ctx);
                if (k >= n && (k - n) % 2 == 0)
                    CHECK(m > 1e-12);
                else
                    CHECK(std::abs(m) < 1e-12);
            }
        }
    }
}

TEST_CASE("spec'd moment examples") {
    SphereContext s3(3); // lambda = 1
    CHECK(std::abs(moment_integral(3, 2, s3)) < 1e-13);
    CHECK(std::abs(moment_integral(1, 3, s3)) < 1e-13);
    CHECK(moment_integral(4, 2, s3) > 0.0);
}

TEST_CASE("closed moment form equals the quadrature moments") {
    for (int d : {1, 2, 3, 5}) {
        SphereContext ctx(d);
        for (int n = 0; n <= 9; ++n)
            for (int k = n; k <= 31; k += 2)
                CHECK(moment_integral_closed(k, n, ctx) ==
                      doctest::Approx(moment_integral(k, n, ctx)).epsilon(1e-11));
    }
}

TEST_CASE("series-route coefficients: signs and oracle agreement") {
    SphereContext s3(3), s2(2);
    // cross-oracle: series vs quadrature at eps = 0.2
    for (int n = 1; n <= 8; ++n) {
        auto spec = PotentialSpec::geodesic(0.5, 0.2);
        SeriesCoefficient sc = coefficient_via_series(spec, n, s3, 4096);
        double qc = gegenbauer_coefficient(spec, n, s3, nullptr, 1e-13);
        CHECK(std::abs(sc.value - qc) <= 1e-8 * std::abs(qc));
    }
    // signs certified at eps = 0 through the one-signed term structure
    for (int n = 1; n <= 12; ++n) {
        CHECK(coefficient_via_series(PotentialSpec::geodesic(0.5), n, s2, 512).value < 0.0);
        CHECK(coefficient_via_series(PotentialSpec::geodesic(-1.0, 0.1), n, s2, 512).value > 0.0);
    }
    CHECK(coefficient_via_series(PotentialSpec::geodesic(-1.0, 0.1), 0, s2, 512).value > 0.0);
}

TEST_SUITE_END();
