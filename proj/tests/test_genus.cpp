#include "doctest.h"
#include "hypeis/genus.hpp"
#include "oracles.hpp"

using namespace hypeis;

TEST_SUITE("genus")
{
    TEST_CASE("Kronecker symbol matches reciprocity")
    {
        for (i64 d : {1, 5, 8, 12, 13, 21, 24, 28, 40, 60, 85})
            for (i64 n = -60; n <= 60; ++n) {
                if (n == 0) continue;
                CAPTURE(d);
                CAPTURE(n);
                CHECK(kronecker(d, n) == oracle::kronecker(d, n));
            }
    }

    TEST_CASE("fundamental divisors")
    {
        CHECK(fundamental_divisors(5) == std::vector<i64>{1, 5});
        CHECK(fundamental_divisors(12) == std::vector<i64>{1, 12});
        CHECK(fundamental_divisors(60) == std::vector<i64>{1, 5, 12, 60});
        for (i64 d : fundamental_divisors(105)) CHECK(105 % d == 0);
    }

    TEST_CASE("genus characters match a box search")
    {
        for (i64 D : {5, 12, 21, 40, 60, 65, 85, 96}) {
            for (i64 d : fundamental_divisors(D)) {
                DiscriminantSplit s = make_split(D, d);
                for (const auto& q : class_reps(D)) {
                    CAPTURE(D);
                    CAPTURE(d);
                    CHECK(genus_character(s, q) == oracle::genus_char(d, q.a, q.b, q.c));
                    // independent of which represented value is used
                    CHECK(genus_character(s, q, 50, 3) == genus_character(s, q));
                }
            }
        }
    }

    TEST_CASE("character is a class function and multiplicative in the split")
    {
        DiscriminantSplit s = make_split(60, 5);
        for (const auto& q : class_reps(60)) {
            CHECK(genus_character(s, q) == genus_character(s, act(q, kS)));
            CHECK(genus_character(s, q) == genus_character(s, act(q, kT)));
        }
        // chi_d(-Q) = chi_d(Q) for d > 0
        CHECK(genus_character(s, {-1, 6, 6}) == genus_character(s, {1, 6, -6}));
    }

    TEST_CASE("trivial character")
    {
        DiscriminantSplit s = make_split(21, 1);
        for (const auto& q : class_reps(21)) CHECK(genus_character(s, q) == 1);
    }
}
