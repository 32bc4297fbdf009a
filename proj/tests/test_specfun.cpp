#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hypeis/specfun.hpp"
#include "oracles.hpp"

using namespace hypeis;

TEST_SUITE("specfun")
{
    TEST_CASE("half-integer Bessel J against the library")
    {
        for (int n = 0; n <= 8; ++n)
            for (double x : {1e-3, 0.05, 0.3, 1.0, 2.5, 7.0, 15.0, 40.0, 120.0}) {
                double ref = std::cyl_bessel_j(n + 0.5, x);
                CAPTURE(n);
                CAPTURE(x);
                if (std::abs(ref) > 1e-300) CHECK(std::abs(bessel_j_half(n, x) - ref) <= 1e-11 * std::abs(ref) + 1e-15);
            }
    }

    TEST_CASE("half-integer Bessel I against the library")
    {
        for (int n = 0; n <= 8; ++n)
            for (double x : {1e-3, 0.05, 0.3, 1.0, 2.5, 7.0, 15.0, 40.0}) {
                CAPTURE(n);
                CAPTURE(x);
                double ref = std::cyl_bessel_i(n + 0.5, x);
                CHECK(std::abs(bessel_i_half(n, x) - ref) <= 1e-12 * std::abs(ref));
            }
    }

    TEST_CASE("closed forms")
    {
        double x = 0.7;
        CHECK(bessel_j_half(0, x) == doctest::Approx(std::sqrt(2 / (std::numbers::pi * x)) * std::sin(x)).epsilon(1e-14));
        CHECK(bessel_i_half(0, x) == doctest::Approx(std::sqrt(2 / (std::numbers::pi * x)) * std::sinh(x)).epsilon(1e-14));
        CHECK(bessel_j_half(1, x) ==
              doctest::Approx(std::sqrt(2 / (std::numbers::pi * x)) * (std::sin(x) / x - std::cos(x))).epsilon(1e-13));
    }

    TEST_CASE("series definitions")
    {
        for (double nu : {0.0, 0.25, 1.5, 3.0})
            for (double x : {0.1, 1.0, 5.0}) {
                CHECK(bessel_j_series(nu, x) == doctest::Approx(std::cyl_bessel_j(nu, x)).epsilon(1e-12));
                CHECK(bessel_i_series(nu, x) == doctest::Approx(std::cyl_bessel_i(nu, x)).epsilon(1e-12));
            }
    }

    TEST_CASE("phi kernel")
    {
        CHECK(phi(0, 2.0, 3) == doctest::Approx(8.0));
        for (std::int64_t m : {-2, 1, 3})
            for (double y : {0.1, 0.9, 2.0}) {
                double am = double(m < 0 ? -m : m);
                double ref = 2 * std::numbers::pi * std::sqrt(am * y) * std::cyl_bessel_i(2.5, 2 * std::numbers::pi * am * y);
                CHECK(phi(m, y, 3) == doctest::Approx(ref).epsilon(1e-12));
            }
    }

    TEST_CASE("divisor sums")
    {
        for (int r = 0; r <= 3; ++r)
            for (std::int64_t n = 1; n <= 60; ++n) CHECK(divisor_sigma(r, n) == oracle::sigma(r, n));
    }
}
