#include "hypeis/genus.hpp"

#include <numeric>
#include <stdexcept>

namespace hypeis {

namespace {

int jacobi(i64 a, i64 n)
{
    // n odd positive
    a %= n;
    if (a < 0) a += n;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace

int kronecker(i64 d, i64 n)
{
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int res = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) res = -res;
    }
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v > 0) {
        if (d % 2 == 0) return 0;
        i64 r = ((d % 8) + 8) % 8;
        if ((v % 2 == 1) && (r == 3 || r == 5)) res = -res;
    }
    if (n == 1) return res;
    return res * jacobi(d, n);
}

std::vector<i64> fundamental_divisors(i64 D)
{
    require_positive_discriminant(D);
    std::vector<i64> out;
    for (i64 d = 1; d <= D; ++d)
        if (D % d == 0 && is_fundamental(d) && is_discriminant(D / d)) out.push_back(d);
    return out;
}

int genus_character(const DiscriminantSplit& split, const QuadForm& q, int r_max, int skip)
{
    if (discriminant(q) != split.D) throw std::invalid_argument("form discriminant does not match split");
    if (std::gcd(content(q), split.d) != 1) return 0;
    for (i64 r = 1; r <= r_max; ++r) {
        // shell max(|x|, |y|) = r, walked in a fixed order
        for (i64 x = -r; x <= r; ++x) {
            for (i64 y = -r; y <= r; ++y) {
                if (std::max(x < 0 ? -x : x, y < 0 ? -y : y) != r) continue;
                i64 n = q.a * x * x + q.b * x * y + q.c * y * y;
                if (n == 0 || std::gcd(n, split.d) != 1) continue;
                if (skip-- > 0) continue;
                return kronecker(split.d, n);
            }
        }
    }
    throw std::runtime_error("no represented n found");
}

}  // namespace hypeis
