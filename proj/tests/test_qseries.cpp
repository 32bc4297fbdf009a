#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hypeis/qseries.hpp"
#include "oracles.hpp"

using namespace hypeis;

namespace {

BigInt big(__int128 x)
{
    bool neg = x < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)x : (unsigned __int128)x;
    BigInt r = 0, p = 1;
    while (u > 0) {
        r += p * BigInt(static_cast<unsigned>(u % 10));
        p *= 10;
        u /= 10;
    }
    return neg ? BigInt(-r) : r;
}

}  // namespace

TEST_SUITE("qseries")
{
    TEST_CASE("Eisenstein coefficients")
    {
        QSeries e4 = eisenstein_qexp(4, 20), e6 = eisenstein_qexp(6, 20), e2 = eisenstein_qexp(2, 20);
        for (int n = 1; n <= 20; ++n) {
            CHECK(e4.coeff(n) == 240 * oracle::sigma(3, n));
            CHECK(e6.coeff(n) == -504 * oracle::sigma(5, n));
            CHECK(e2.coeff(n) == -24 * oracle::sigma(1, n));
        }
        // E4^2 = E8 = 1 + 480 sum sigma_7(n) q^n
        QSeries e8 = e4 * e4;
        for (int n = 1; n <= 20; ++n) CHECK(e8.coeff(n) == 480 * oracle::sigma(7, n));
    }

    TEST_CASE("Delta equals the eta product")
    {
        QSeries d = delta_qexp(40);
        auto ref = oracle::delta_eta(40);
        for (int n = 0; n <= 40; ++n) CHECK(d.coeff(n) == big(ref[n]));
        CHECK(d.coeff(2) == -24);
        CHECK(d.coeff(3) == 252);
    }

    TEST_CASE("j expansion")
    {
        QSeries j = j_qexp(6);
        CHECK(j.val == -1);
        CHECK(j.coeff(-1) == 1);
        CHECK(j.coeff(0) == 744);
        CHECK(j.coeff(1) == 196884);
        CHECK(j.coeff(2) == 21493760);
        CHECK(j.coeff(3) == 864299970);
        CHECK(j.coeff(4) == BigInt("20245856256"));
    }

    TEST_CASE("Faber polynomials are q^-m + O(q)")
    {
        for (int m = 0; m <= 6; ++m) {
            QSeries f = faber_jm(m, 12);
            CHECK(f.coeff(-m) == 1);
            for (int n = -m + 1; n <= 0; ++n) CHECK(f.coeff(n) == (m == 0 && n == 0 ? 1 : 0));
        }
        CHECK(faber_jm(2, 4).coeff(1) == BigInt(42987520));
    }

    TEST_CASE("Hecke images of j_1 are Faber polynomials")
    {
        QSeries j1 = faber_jm(1, 60);
        for (int m = 2; m <= 5; ++m) {
            QSeries h = hecke_normalized(j1, m, 10), f = faber_jm(m, 10);
            for (int n = -m; n <= 10; ++n) CHECK(h.coeff(n) == f.coeff(n));
        }
    }

    TEST_CASE("series arithmetic")
    {
        QSeries e4 = eisenstein_qexp(4, 15);
        QSeries inv = inverse(e4);
        QSeries one = e4 * inv;
        CHECK(one.coeff(0) == 1);
        for (int n = 1; n <= 15; ++n) CHECK(one.coeff(n) == 0);
        CHECK_THROWS(divide_exact(e4, 7));
        CHECK(power(e4, 3).coeff(1) == 720);
        QSeries dj = d_operator(j_qexp(5));
        CHECK(dj.coeff(-1) == -1);
        CHECK(dj.coeff(1) == 196884);
    }

    TEST_CASE("numeric evaluation and tails")
    {
        std::complex<double> tau(0.1, 1.2);
        auto e = eval_qseries<double>(eisenstein_qexp(4, 40), tau);
        std::complex<double> q = std::exp(std::complex<double>(0, 2 * std::numbers::pi) * tau), s = 1, qn = 1;
        for (int n = 1; n <= 60; ++n) {
            qn *= q;
            s += 240.0 * double(oracle::sigma(3, n)) * qn;
        }
        CHECK(std::abs(e.value - s) < 1e-12);
        CHECK(e.tail < 1e-20);
        CHECK_THROWS_AS(eval_qseries<double>(eisenstein_qexp(4, 10), {0, 0.05}, 1e-6), QSeriesTailError);
    }

    TEST_CASE("E2* transforms with weight 2")
    {
        for (auto tau : {std::complex<double>(0.13, 0.9), {-0.4, 1.3}, {0.31, 0.7}, {0.05, 1.05}, {0.45, 0.95}}) {
            auto a = e2_star(tau).value;
            auto b = e2_star(-1.0 / tau).value;
            CHECK(std::abs(b - tau * tau * a) < 1e-8 * std::abs(tau * tau * a));
        }
    }

    TEST_CASE("j is invariant and j_m is a Hecke sum")
    {
        std::complex<double> z(0.2, 1.1);
        CHECK(std::abs(j1_value(z) - j1_value(-1.0 / z)) < 1e-7 * std::abs(j1_value(z)));
        // j_2 = j_1^2 - 2 * 196884
        auto j1 = j1_value(z);
        CHECK(std::abs(jm_value(2, z) - (j1 * j1 - 2.0 * 196884)) < 1e-8 * std::abs(j1 * j1));
    }

    TEST_CASE("AKN kernel")
    {
        AknResult r = akn_kernel({0, 2.1}, {0.2, 1.0}, 20);
        CHECK(std::abs(r.direct - r.series) < 1e-6);
        CHECK(r.series_converged);
        AknResult bad = akn_kernel({0, 0.9}, {0.2, 1.0}, 20);
        CHECK_FALSE(bad.series_converged);
    }
}
