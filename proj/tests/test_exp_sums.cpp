#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hypeis/exp_sums.hpp"
#include "hypeis/genus.hpp"
#include "oracles.hpp"

using namespace hypeis;

namespace {

std::complex<double> salie_oracle(i64 D, i64 d, i64 m, i64 c)
{
    std::complex<double> s = 0;
    for (i64 b = 0; b < c; ++b) {
        if (((b * b - D) % c + c) % c != 0) continue;
        int chi = oracle::genus_char(d, c / 4, b, (b * b - D) / c);
        s += double(chi) * std::polar(1.0, 2 * std::numbers::pi * double(2 * m * b % c) / double(c));
    }
    return s;
}

}  // namespace

TEST_SUITE("exp_sums")
{
    TEST_CASE("Weyl sums for the golden form")
    {
        QuadForm q{1, 1, -1};
        CHECK(std::abs(weyl_sum(q, 0, 1) - 1.0) < 1e-14);
        CHECK(std::abs(weyl_sum(q, 1, 1) + 1.0) < 1e-14);
        // 3 is inert in Q(sqrt 5): no b with b^2 = 5 mod 12
        CHECK(std::abs(weyl_sum(q, 1, 3)) == 0.0);
        CHECK_THROWS(weyl_sum(q, 1, 0));
    }

    TEST_CASE("Salie sums: small values")
    {
        DiscriminantSplit s = make_split(5, 1);
        CHECK(std::abs(salie_sum(s, 0, 4) - 2.0) < 1e-14);
        CHECK(std::abs(salie_sum(s, 1, 4) + 2.0) < 1e-14);
        CHECK_THROWS(salie_sum(s, 1, 6));
    }

    TEST_CASE("Salie sums match a brute-force scan")
    {
        for (i64 D : {5, 12, 21, 60})
            for (i64 d : fundamental_divisors(D))
                for (i64 m : {-3, -1, 0, 1, 2, 5})
                    for (i64 c = 4; c <= 160; c += 4) {
                        CAPTURE(D);
                        CAPTURE(d);
                        CAPTURE(m);
                        CAPTURE(c);
                        auto v = salie_sum(make_split(D, d), m, c);
                        CHECK(std::abs(v - salie_oracle(D, d, m, c)) < 1e-10);
                        CHECK(std::abs(v.imag()) < 1e-12);
                    }
    }

    TEST_CASE("sieved table agrees with the direct sum")
    {
        for (i64 D : {5, 12, 21, 60, 85}) {
            DiscriminantSplit s = make_split(D, fundamental_divisors(D).back());
            SalieTable t(s, 400);
            for (i64 m : {-2, 0, 1, 3})
                for (i64 a = 1; a <= 400; a += 7) CHECK(std::abs(t.T(m, a) - salie_sum(s, m, 4 * a).real()) < 1e-9);
        }
        CHECK_THROWS(SalieTable(make_split(5, 5), 10).T(1, 11));
    }

    TEST_CASE("T_m = T_{-m}")
    {
        DiscriminantSplit s = make_split(21, 21);
        for (i64 m = 1; m <= 4; ++m)
            for (i64 c = 4; c <= 200; c += 4) CHECK(std::abs(salie_sum(s, m, c) - salie_sum(s, -m, c)) < 1e-10);
    }

    TEST_CASE("Weyl sums by class match the per-form sums")
    {
        ClassIndex idx(60);
        for (i64 a : {1, 2, 3, 5, 7, 11, -4})
            for (i64 m : {0, 1, 2}) {
                auto all = weyl_sums_by_class(idx, m, a);
                for (size_t i = 0; i < idx.reps().size(); ++i) CHECK(std::abs(all[i] - weyl_sum(idx.reps()[i], m, a)) < 1e-12);
            }
    }

    TEST_CASE("Salie sums stay below a^0.6 growth")
    {
        DiscriminantSplit s = make_split(5, 5);
        const SalieTable& t = salie_table(s, 2000);
        double worst = 0;
        for (i64 a = 1; a <= 2000; ++a) worst = std::max(worst, std::abs(t.T(1, a)) / std::pow(double(a), 0.6));
        CHECK(worst < 8);
    }
}
