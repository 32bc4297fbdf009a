#pragma once

#include <complex>
#include <vector>

#include "hypeis/qforms.hpp"

namespace hypeis {

std::complex<double> weyl_sum(const QuadForm& q, i64 m, i64 a);

// W_Q(m, a) for every class of idx at once (one scan over b)
std::vector<std::complex<double>> weyl_sums_by_class(const ClassIndex& idx, i64 m, i64 a);

std::complex<double> salie_sum(const DiscriminantSplit& split, i64 m, i64 c);

// Square roots b of D mod 4a with the character of [a, b, (b^2 - D)/4a], for a = 1..a_max.
// Gives T_m(d, d', 4a) for all m without rescanning.
class SalieTable {
public:
    SalieTable(const DiscriminantSplit& split, i64 a_max);

    const DiscriminantSplit& split() const { return split_; }
    i64 a_max() const { return a_max_; }
    double T(i64 m, i64 a) const;

private:
    struct Root {
        i64 b;
        int chi;
    };
    DiscriminantSplit split_;
    i64 a_max_;
    std::vector<std::vector<Root>> roots_;
};

// Shared, immutable tables keyed by (D, d); grown on demand.
const SalieTable& salie_table(const DiscriminantSplit& split, i64 a_max);

}  // namespace hypeis
