#pragma once

#include <vector>

#include "hypeis/qforms.hpp"

namespace hypeis {

int kronecker(i64 d, i64 n);

std::vector<i64> fundamental_divisors(i64 D);

// Spiral search for n = Q(x, y) with gcd(n, d) = 1 over shells max(|x|,|y|) = 1..r_max.
// skip > 0 returns the value at the (skip+1)-th admissible n instead of the first.
int genus_character(const DiscriminantSplit& split, const QuadForm& q, int r_max = 50, int skip = 0);

}  // namespace hypeis
