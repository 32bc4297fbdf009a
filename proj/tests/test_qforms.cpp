#include <cmath>

#include "doctest.h"
#include "hypeis/qforms.hpp"
#include "oracles.hpp"

using namespace hypeis;

TEST_SUITE("qforms")
{
    TEST_CASE("class numbers match a union-find over S and T moves")
    {
        for (i64 D = 5; D <= 100; ++D) {
            if (!is_discriminant(D) || is_square(D)) continue;
            CAPTURE(D);
            CHECK(static_cast<int>(class_reps(D).size()) == oracle::class_count(D));
        }
    }

    TEST_CASE("small class groups")
    {
        CHECK(class_reps(5).size() == 1);
        CHECK(class_reps(12).size() == 2);
        CHECK(class_reps(13).size() == 1);
        CHECK_THROWS(class_reps(7));
        CHECK_THROWS(class_reps(16));
    }

    TEST_CASE("reduction lands on a reduced equivalent form")
    {
        for (QuadForm q : {QuadForm{3, 7, 1}, QuadForm{-5, 11, -4}, QuadForm{17, 33, 12}, QuadForm{2, 2, -1}}) {
            QuadForm r = reduce(q);
            CHECK(is_reduced(r));
            CHECK(discriminant(r) == discriminant(q));
            CHECK(equivalent(q, r));
        }
        CHECK(is_reduced({1, 1, -1}));
        CHECK_FALSE(is_reduced({1, 3, 1}));
    }

    TEST_CASE("rho step matrix")
    {
        QuadForm q{1, 1, -1};
        for (int i = 0; i < 6; ++i) {
            Matrix2Z g;
            QuadForm r = rho_step(q, &g);
            CHECK(det(g) == 1);
            CHECK(act(q, g) == r);
            q = r;
        }
    }

    TEST_CASE("equivalence under the generators")
    {
        QuadForm q{2, 5, -1};
        CHECK(equivalent(q, act(q, kS)));
        CHECK(equivalent(q, act(q, kT)));
        CHECK(equivalent(q, act(act(q, kT), kS)));
        CHECK_FALSE(equivalent(QuadForm{1, 2, -2}, QuadForm{2, 2, -1}));
    }

    TEST_CASE("Pell solutions match brute force")
    {
        for (i64 D : {5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 40, 41, 44, 53, 60, 61, 73, 76, 89, 97}) {
            auto [t, u] = oracle::pell(D);
            PellSolution p = pell(D);
            CAPTURE(D);
            CHECK(p.t == t);
            CHECK(p.u == u);
        }
        CHECK(pell(5).t == 3);
        CHECK(pell(5).u == 1);
    }

    TEST_CASE("automorph fixes its form")
    {
        for (QuadForm q : {QuadForm{1, 1, -1}, QuadForm{1, 2, -2}, QuadForm{2, 2, -1}, QuadForm{1, 3, -1}}) {
            Matrix2Z g = automorph(q);
            CHECK(det(g) == 1);
            CHECK(act(q, g) == q);
            CHECK_FALSE(g == kIdentity);
        }
    }

    TEST_CASE("geodesic data")
    {
        Geodesic g = geodesic({1, 1, -1});
        CHECK(g.length() == doctest::Approx(2 * std::log((3 + std::sqrt(5.0)) / 2)).epsilon(1e-14));
        double w = g.w, wp = g.wprime;
        CHECK(std::abs(w * w + w - 1) < 1e-14);
        CHECK(std::abs(wp * wp + wp - 1) < 1e-14);
    }

    TEST_CASE("form enumeration covers each translation orbit once")
    {
        auto forms = enumerate_forms(5, 30);
        for (const auto& q : forms) {
            CHECK(discriminant(q) == 5);
            i64 aa = q.a < 0 ? -q.a : q.a;
            CHECK(aa <= 30);
            CHECK(q.b >= 0);
            CHECK(q.b < 2 * aa);
        }
        // b^2 = 5 mod 4a has 2 roots mod 2a for a = 1 (b = 1 only, mod 2)
        int a1 = 0;
        for (const auto& q : forms) a1 += q.a == 1;
        CHECK(a1 == 1);
    }

    TEST_CASE("discriminant predicates")
    {
        CHECK(is_fundamental(5));
        CHECK(is_fundamental(8));
        CHECK(is_fundamental(12));
        CHECK_FALSE(is_fundamental(20));
        CHECK_FALSE(is_fundamental(9));
        CHECK(is_discriminant(21));
        CHECK_FALSE(is_discriminant(7));
        CHECK_THROWS(make_split(12, 5));
        DiscriminantSplit s = make_split(12, 12);
        CHECK(s.dprime == 1);
    }

    TEST_CASE("reduction to the fundamental domain")
    {
        Matrix2Z g;
        std::complex<double> z(0.37, 0.05);
        auto r = reduce_to_fundamental(z, &g);
        CHECK(std::abs(r.real()) <= 0.5 + 1e-12);
        CHECK(std::norm(r) >= 1 - 1e-12);
        CHECK(std::abs(mobius(g, z) - r) < 1e-10);
    }
}
