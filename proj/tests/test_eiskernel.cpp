#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hypeis/cycles.hpp"
#include "hypeis/eiskernel.hpp"
#include "oracles.hpp"

using namespace hypeis;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("eiskernel")
{
    TEST_CASE("taper")
    {
        CHECK(taper_weight(10, 100) == 1.0);
        CHECK(taper_weight(50, 100) == 1.0);
        CHECK(taper_weight(75, 100) == doctest::Approx(0.5));
        CHECK(taper_weight(100, 100) == 0.0);
        CHECK(taper_weight(140, 100) == 0.0);
    }

    TEST_CASE("contour integral equals 2 pi i times the closed form")
    {
        for (int k : {4, 6})
            for (i64 m : {1, 3})
                for (double lam : {0.3, 2.7}) {
                    double v = (k / 2.0) / (2 * kPi * m);
                    QuadResult r = contour_cm(k, m, lam, v, 0.0, 1e-13);
                    std::complex<double> ref(0, 2 * kPi * laplace_bessel(k, m, lam));
                    CAPTURE(k);
                    CAPTURE(m);
                    CAPTURE(lam);
                    CHECK(std::abs(r.value - ref) < 1e-8 * std::abs(ref));
                }
        // the closed form vanishes for m <= 0
        CHECK(laplace_bessel(4, 0, 1.0) == 0.0);
        CHECK(std::abs(contour_cm(4, 0, 1.0, 0.5, 0.0, 1e-13).value) < 1e-8);
        CHECK(std::abs(contour_cm(6, -1, 0.3, 0.5, 0.0, 1e-13).value) < 1e-8);
        // the line abscissa does not matter
        auto a = contour_cm(6, 2, 1.0, 0.2, 0.0, 1e-13).value, b = contour_cm(6, 2, 1.0, 0.9, 0.0, 1e-13).value;
        CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
        CHECK_THROWS(contour_cm(2, 1, 1.0, 0.5, -0.6, 1e-10));
    }

    TEST_CASE("weight 12 coefficients are proportional to Ramanujan tau")
    {
        auto delta = oracle::delta_eta(8);
        DiscriminantSplit s = make_split(5, 5);
        FourierCoeff c1 = fourier_coeff_bessel(12, s, 1, 500);
        CHECK(std::abs(c1.value.imag()) < 1e-12);
        for (int m = 2; m <= 6; ++m) {
            FourierCoeff cm = fourier_coeff_bessel(12, s, m, 500);
            CHECK(cm.value.real() / c1.value.real() == doctest::Approx(double(delta[m])).epsilon(1e-8));
        }
    }

    TEST_CASE("weight 4 table vanishes at the cusp")
    {
        FourierTable t = fourier_table(4, make_split(5, 5), 3, 500);
        CHECK(t.coeffs[0] == std::complex<double>(0));
        CHECK(t.const_times_v == 0.0);
        CHECK(t.coeffs.size() == 4);
    }

    TEST_CASE("weight 2 constant term")
    {
        DiscriminantSplit s = make_split(5, 5);
        double tr1 = 2 * std::log((3 + std::sqrt(5.0)) / 2);
        double v = 3.0;
        CHECK(constant_term_k2(s, v) == doctest::Approx(-2 / std::sqrt(5.0) * tr1 * 3 / (kPi * v)).epsilon(1e-10));
    }

    TEST_CASE("lattice sum at weight 12 is modular")
    {
        DiscriminantSplit s = make_split(5, 5);
        std::complex<double> tau(0.1, 1.3);
        LatticeSum e = twisted_eis(12, s, tau, 0.0, 300);
        LatticeSum et = twisted_eis(12, s, tau + 1.0, 0.0, 300);
        LatticeSum es = twisted_eis(12, s, -1.0 / tau, 0.0, 300);
        CHECK(std::abs(et.value - e.value) <= e.uncertainty + et.uncertainty + 1e-12);
        std::complex<double> t12 = std::pow(tau, 12);
        CHECK(std::abs(es.value - t12 * e.value) <= es.uncertainty + std::abs(t12) * e.uncertainty + 1e-12);
        // and matches its Fourier expansion
        FourierValue f = fourier_eval(12, s, tau, 0.0, 10, 500);
        CHECK(std::abs(f.value - e.value) <= f.tail + e.uncertainty + 1e-9 * std::abs(e.value));
    }

    TEST_CASE("argument checks")
    {
        DiscriminantSplit s = make_split(5, 5);
        CHECK_THROWS(twisted_eis(2, s, {0, 2}, 0.0, 100));
        CHECK_THROWS(twisted_eis(4, s, {0, 2}, -1.5, 100));
        CHECK_THROWS(twisted_eis(4, s, {0, 2}, 0.0, 4));
        CHECK_THROWS(fourier_eval(4, s, {0, 2}, 0.5, 5, 100));
    }
}
