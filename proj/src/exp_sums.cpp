#include "hypeis/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hypeis/genus.hpp"
#include "hypeis/summation.hpp"

namespace hypeis {

namespace {

i64 mod_pos(i64 x, i64 m)
{
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

// e^{2 pi i r / n}
std::complex<double> unit_root(i64 r, i64 n)
{
    double t = 2.0 * std::numbers::pi * static_cast<double>(mod_pos(r, n)) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
}

}  // namespace

std::complex<double> weyl_sum(const QuadForm& q, i64 m, i64 a)
{
    if (a == 0) throw std::invalid_argument("weyl sum needs a != 0");
    i64 D = discriminant(q);
    require_positive_discriminant(D);
    auto cyc = reduction_cycle(q);
    i64 aa = a < 0 ? -a : a;
    CompensatedSum<std::complex<double>> acc;
    for (i64 b = mod_pos(D, 2); b < 2 * aa; b += 2) {
        if ((b * b - D) % (4 * aa) != 0) continue;
        QuadForm f{a, b, (b * b - D) / (4 * a)};
        if (std::find(cyc.begin(), cyc.end(), reduce(f)) == cyc.end()) continue;
        // e^{pi i m b / a}
        acc += unit_root((a < 0 ? -m : m) * b, 2 * aa);
    }
    return acc.value();
}

std::vector<std::complex<double>> weyl_sums_by_class(const ClassIndex& idx, i64 m, i64 a)
{
    if (a == 0) throw std::invalid_argument("weyl sum needs a != 0");
    i64 D = idx.D();
    i64 aa = a < 0 ? -a : a;
    std::vector<CompensatedSum<std::complex<double>>> acc(idx.reps().size());
    for (i64 b = mod_pos(D, 2); b < 2 * aa; b += 2) {
        if ((b * b - D) % (4 * aa) != 0) continue;
        QuadForm f{a, b, (b * b - D) / (4 * a)};
        acc[idx.class_of(f)] += unit_root((a < 0 ? -m : m) * b, 2 * aa);
    }
    std::vector<std::complex<double>> out;
    for (auto& s : acc) out.push_back(s.value());
    return out;
}

std::complex<double> salie_sum(const DiscriminantSplit& split, i64 m, i64 c)
{
    if (c <= 0 || c % 4 != 0) throw std::invalid_argument("salie sum needs c > 0, c = 0 mod 4");
    i64 D = split.D;
    CompensatedSum<std::complex<double>> acc;
    for (i64 b = 0; b < c; ++b) {
        if (mod_pos(b * b - D, c) != 0) continue;
        int chi = genus_character(split, {c / 4, b, (b * b - D) / c});
        if (chi == 0) continue;
        acc += double(chi) * unit_root(2 * m * b, c);
    }
    return acc.value();
}

namespace {

i64 powmod(i64 b, i64 e, i64 p)
{
    i64 r = 1;
    b %= p;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

// square roots of n mod an odd prime p (Tonelli-Shanks)
std::vector<i64> sqrt_mod_prime(i64 n, i64 p)
{
    n = mod_pos(n, p);
    if (n == 0) return {0};
    if (powmod(n, (p - 1) / 2, p) != 1) return {};
    i64 q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(n, q, p), r = powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return {r, p - r};
}

}  // namespace

// Roots are found from the b side: b^2 = D mod 4a iff a | N_b = (b^2 - D)/4, and 0 <= b < 2a.
// N_b is factored over primes <= a_max by sieving along the residue classes of its roots.
SalieTable::SalieTable(const DiscriminantSplit& split, i64 a_max) : split_(split), a_max_(a_max), roots_(a_max + 1)
{
    const i64 D = split.D, b0 = mod_pos(D, 2), nb = a_max - b0 + (b0 == 0 ? 0 : 1);
    // b = b0 + 2 i for i in [0, nb), covering b < 2 a_max
    std::vector<i64> rest(nb);
    std::vector<std::vector<std::pair<i64, int>>> fac(nb);
    for (i64 i = 0; i < nb; ++i) {
        i64 b = b0 + 2 * i;
        i64 n = (b * b - D) / 4;
        rest[i] = n < 0 ? -n : n;
    }
    std::vector<char> composite(a_max + 1, 0);
    for (i64 p = 2; p <= a_max; ++p) {
        if (composite[p]) continue;
        for (i64 q = p * p; q <= a_max; q += p) composite[q] = 1;
        auto strip = [&](i64 i) {
            int e = 0;
            while (rest[i] % p == 0) {
                rest[i] /= p;
                ++e;
            }
            if (e > 0) fac[i].push_back({p, e});
        };
        if (p == 2) {
            for (i64 i = 0; i < nb; ++i) strip(i);
            continue;
        }
        for (i64 x : sqrt_mod_prime(D, p)) {
            // b = x mod p and b = b0 mod 2, so i = (b - b0)/2 runs mod p
            i64 i0 = mod_pos((x - b0) * ((p + 1) / 2), p);
            for (i64 i = i0; i < nb; i += p) strip(i);
        }
    }
    std::vector<i64> divs;
    for (i64 i = 0; i < nb; ++i) {
        i64 b = b0 + 2 * i;
        divs.assign(1, 1);
        for (auto [p, e] : fac[i]) {
            size_t n = divs.size();
            i64 pe = 1;
            for (int k = 1; k <= e; ++k) {
                pe *= p;
                for (size_t j = 0; j < n; ++j)
                    if (divs[j] <= a_max / pe) divs.push_back(divs[j] * pe);
            }
        }
        for (i64 a : divs) {
            if (a > a_max || 2 * a <= b) continue;
            int chi = genus_character(split, {a, b, (b * b - D) / (4 * a)});
            if (chi != 0) roots_[a].push_back({b, chi});
        }
    }
}

double SalieTable::T(i64 m, i64 a) const
{
    if (a < 1 || a > a_max_) throw std::out_of_range("salie table index");
    // T_m(4a) = 2 sum_{b mod 2a} chi cos(pi m b / a); b and 4a - b pair up
    CompensatedSum<double> acc;
    for (const auto& [b, chi] : roots_[a]) {
        i64 r = mod_pos(m * b, 2 * a);
        acc += chi * std::cos(std::numbers::pi * static_cast<double>(r) / static_cast<double>(a));
    }
    return 2.0 * acc.value();
}

const SalieTable& salie_table(const DiscriminantSplit& split, i64 a_max)
{
    static std::mutex mu;
    // tables are never freed, so returned references stay valid
    static std::map<std::pair<i64, i64>, std::vector<std::unique_ptr<SalieTable>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{split.D, split.d}];
    for (const auto& t : slot)
        if (t->a_max() >= a_max) return *t;
    slot.push_back(std::make_unique<SalieTable>(split, a_max));
    return *slot.back();
}

}  // namespace hypeis
