#include "hypeis/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hypeis {

namespace {

using i128 = __int128;

i64 checked(i128 v)
{
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("integer overflow");
    return static_cast<i64>(v);
}

i64 mod_pos(i64 x, i64 m)
{
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

}  // namespace

Matrix2Z operator*(const Matrix2Z& x, const Matrix2Z& y)
{
    return {checked(i128(x.a) * y.a + i128(x.b) * y.c), checked(i128(x.a) * y.b + i128(x.b) * y.d),
            checked(i128(x.c) * y.a + i128(x.d) * y.c), checked(i128(x.c) * y.b + i128(x.d) * y.d)};
}

i64 det(const Matrix2Z& g) { return checked(i128(g.a) * g.d - i128(g.b) * g.c); }

Matrix2Z inverse(const Matrix2Z& g)
{
    if (det(g) != 1) throw std::invalid_argument("matrix not in SL2(Z)");
    return {g.d, -g.b, -g.c, g.a};
}

i64 discriminant(const QuadForm& q) { return checked(i128(q.b) * q.b - i128(4) * q.a * q.c); }

int sgn_form(const QuadForm& q)
{
    if (q.a != 0) return q.a > 0 ? 1 : -1;
    if (q.c != 0) return q.c > 0 ? 1 : -1;
    throw std::invalid_argument("undefined sign");
}

i64 content(const QuadForm& q) { return std::gcd(std::gcd(q.a, q.b), q.c); }

QuadForm act(const QuadForm& q, const Matrix2Z& g)
{
    // Q(ax + by, cx + dy)
    i128 a = q.a, b = q.b, c = q.c;
    i128 na = a * g.a * g.a + b * g.a * g.c + c * g.c * g.c;
    i128 nb = 2 * a * g.a * g.b + b * (i128(g.a) * g.d + i128(g.b) * g.c) + 2 * c * g.c * g.d;
    i128 nc = a * g.b * g.b + b * g.b * g.d + c * g.d * g.d;
    return {checked(na), checked(nb), checked(nc)};
}

QuadForm form_of_matrix(const Matrix2Z& g)
{
    if (g.b == 0 && g.c == 0 && g.a == g.d && (g.a == 1 || g.a == -1))
        throw std::invalid_argument("form of +-identity is zero");
    return {g.c, g.d - g.a, -g.b};
}

i64 isqrt(i64 n)
{
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (i128(r) * r > n) --r;
    while (i128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(i64 n) { return n >= 0 && isqrt(n) * isqrt(n) == n; }

bool is_discriminant(i64 D) { return mod_pos(D, 4) == 0 || mod_pos(D, 4) == 1; }

static bool squarefree(i64 n)
{
    n = n < 0 ? -n : n;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

bool is_fundamental(i64 d)
{
    if (d == 1) return true;
    if (d <= 0) return false;
    if (d % 4 == 1) return squarefree(d);
    if (d % 4 == 0) {
        i64 m = d / 4;
        return (m % 4 == 2 || m % 4 == 3) && squarefree(m);
    }
    return false;
}

void require_positive_discriminant(i64 D)
{
    if (D <= 0 || is_square(D) || !is_discriminant(D))
        throw std::invalid_argument("invalid discriminant " + std::to_string(D) +
                                    " (need D > 0, non-square, D = 0 or 1 mod 4)");
}

bool is_reduced(const QuadForm& q)
{
    i64 D = discriminant(q);
    if (D <= 0 || is_square(D)) return false;
    i64 a2 = 2 * (q.a < 0 ? -q.a : q.a);
    if (q.b <= 0 || i128(q.b) * q.b >= D) return false;
    // sqrt(D) - b < 2|a|  <=>  D < (2|a| + b)^2
    if (i128(a2 + q.b) * (a2 + q.b) <= D) return false;
    // 2|a| < sqrt(D) + b  <=>  2|a| - b <= 0 or (2|a| - b)^2 < D
    i64 t = a2 - q.b;
    return t <= 0 || i128(t) * t < D;
}

QuadForm rho_step(const QuadForm& q, Matrix2Z* step)
{
    i64 D = discriminant(q);
    if (q.c == 0) throw std::invalid_argument("rho step needs c != 0");
    i64 ac = q.c < 0 ? -q.c : q.c;
    i64 m = 2 * ac;
    i64 r = mod_pos(-q.b, m);
    i64 nb;
    if (i128(ac) * ac > D) {
        nb = r > ac ? r - m : r;  // -|c| < b' <= |c|
    } else {
        i64 s = isqrt(D);         // sqrt(D) - 2|c| < b' < sqrt(D)
        nb = r + m * ((s - r) >= 0 ? (s - r) / m : -((r - s + m - 1) / m));
    }
    // b' = -b + 2ct
    i64 t = (nb + q.b) / (2 * q.c);
    if (step) *step = Matrix2Z{0, -1, 1, t};
    i128 nc = (i128(nb) * nb - D) / (i128(4) * q.c);
    return {q.c, nb, checked(nc)};
}

QuadForm reduce(const QuadForm& q)
{
    i64 D = discriminant(q);
    if (D <= 0 || is_square(D)) throw std::invalid_argument("reduction needs positive non-square discriminant");
    QuadForm f = q;
    for (int iter = 0; iter < 100000; ++iter) {
        if (is_reduced(f)) return f;
        f = rho_step(f);
    }
    throw std::runtime_error("reduction did not terminate");
}

std::vector<QuadForm> reduction_cycle(const QuadForm& q)
{
    QuadForm start = reduce(q);
    std::vector<QuadForm> cyc{start};
    for (QuadForm f = rho_step(start); f != start; f = rho_step(f)) cyc.push_back(f);
    return cyc;
}

std::vector<QuadForm> reduced_forms(i64 D)
{
    require_positive_discriminant(D);
    std::vector<QuadForm> out;
    for (i64 b = 1; i128(b) * b < D; ++b) {
        if ((b - D) % 2 != 0) continue;
        i64 n = (D - b * b) / 4;  // -ac > 0
        for (i64 a = 1; a <= n; ++a) {
            if (n % a != 0) continue;
            for (i64 sa : {a, -a}) {
                QuadForm f{sa, b, -n / sa};
                if (is_reduced(f)) out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// canonical representative: prefer a > 0, then small |a|, then small b
bool rep_less(const QuadForm& x, const QuadForm& y)
{
    auto key = [](const QuadForm& f) { return std::tuple(f.a <= 0, f.a < 0 ? -f.a : f.a, f.b, f.c); };
    return key(x) < key(y);
}

}  // namespace

std::vector<QuadForm> class_reps(i64 D)
{
    require_positive_discriminant(D);
    std::vector<QuadForm> reps;
    for (i64 g = 1; g * g <= D; ++g) {
        if (D % (g * g) != 0 || !is_discriminant(D / (g * g))) continue;
        i64 D0 = D / (g * g);
        std::map<QuadForm, bool> seen;
        for (const auto& f : reduced_forms(D0)) {
            if (content(f) != 1 || seen.count(f)) continue;
            auto cyc = reduction_cycle(f);
            for (const auto& h : cyc) seen[h] = true;
            QuadForm best = *std::min_element(cyc.begin(), cyc.end(), rep_less);
            reps.push_back({g * best.a, g * best.b, g * best.c});
        }
    }
    return reps;
}

bool equivalent(const QuadForm& q1, const QuadForm& q2)
{
    if (discriminant(q1) != discriminant(q2)) throw std::invalid_argument("mismatched discriminants");
    auto cyc = reduction_cycle(q2);
    QuadForm r1 = reduce(q1);
    return std::find(cyc.begin(), cyc.end(), r1) != cyc.end();
}

ClassIndex::ClassIndex(i64 D) : D_(D), reps_(class_reps(D))
{
    for (int i = 0; i < static_cast<int>(reps_.size()); ++i)
        for (const auto& f : reduction_cycle(reps_[i])) index_[f] = i;
}

int ClassIndex::class_of(const QuadForm& q) const
{
    auto it = index_.find(reduce(q));
    if (it == index_.end()) throw std::invalid_argument("form not of this discriminant");
    return it->second;
}

PellSolution pell(i64 D)
{
    if (D <= 0 || is_square(D)) throw std::invalid_argument("pell needs positive non-square D");
    if (!is_discriminant(D)) {
        // t, u are both even here: reduce to x^2 - D y^2 = 1 via discriminant 4D
        auto [t4, u4] = pell(4 * D);
        return {t4, 2 * u4};
    }
    // continued fraction of the reduced quadratic irrational (b0 + sqrt D)/2, b0 = D mod 2
    i64 s = isqrt(D);
    i64 b0 = s;
    if ((b0 - D) % 2 != 0) --b0;
    i64 P = b0, Qd = 2;
    i128 m11 = 1, m12 = 0, m21 = 0, m22 = 1;
    int len = 0;
    if ((D - P * P) % Qd != 0) throw std::logic_error("pell: bad start");
    do {
        i64 a = (P + s) / Qd;
        i128 n11 = m11 * a + m12, n21 = m21 * a + m22;
        m12 = m11;
        m22 = m21;
        m11 = n11;
        m21 = n21;
        if (m11 > (i128(1) << 100)) throw std::overflow_error("pell solution too large");
        i64 Pn = a * Qd - P;
        i64 Qn = (D - Pn * Pn) / Qd;
        P = Pn;
        Qd = Qn;
        ++len;
    } while (!(P == b0 && Qd == 2));
    if (len % 2 == 1) {
        i128 a11 = m11 * m11 + m12 * m21, a12 = m11 * m12 + m12 * m22;
        i128 a21 = m21 * m11 + m22 * m21, a22 = m21 * m12 + m22 * m22;
        m11 = a11;
        m12 = a12;
        m21 = a21;
        m22 = a22;
    }
    PellSolution out{checked(m11 + m22), checked(m21)};  // u = 2 m21 / Q0 with Q0 = 2
    if (i128(out.t) * out.t - i128(D) * out.u * out.u != 4) throw std::logic_error("pell: check failed");
    return out;
}

PellSolution pell_bruteforce(i64 D, i64 u_max)
{
    for (i64 u = 1; u <= u_max; ++u) {
        i128 t2 = i128(D) * u * u + 4;
        if (t2 > INT64_MAX) break;
        i64 t = isqrt(static_cast<i64>(t2));
        if (i128(t) * t == t2) return {t, u};
    }
    throw std::runtime_error("no Pell solution in search range");
}

namespace {

QuadForm primitive_part(const QuadForm& q)
{
    i64 g = content(q);
    if (g < 0) g = -g;
    return {q.a / g, q.b / g, q.c / g};
}

}  // namespace

Matrix2Z automorph(const QuadForm& q)
{
    QuadForm p = primitive_part(q);
    auto [t, u] = pell(discriminant(p));
    Matrix2Z m{checked((i128(t) + i128(p.b) * u) / 2), checked(i128(p.c) * u), checked(-i128(p.a) * u),
               checked((i128(t) - i128(p.b) * u) / 2)};
    if (det(m) != 1) throw std::logic_error("automorph: determinant");
    return m;
}

double Geodesic::length() const { return 2.0 * std::log(epsilon); }

Geodesic geodesic(const QuadForm& q)
{
    QuadForm p = primitive_part(q);
    i64 D0 = discriminant(p);
    auto [t, u] = pell(D0);
    double sD = std::sqrt(static_cast<double>(discriminant(q)));
    double r1 = (-q.b + sD) / (2.0 * q.a), r2 = (-q.b - sD) / (2.0 * q.a);
    Geodesic g;
    g.form = q;
    g.w = std::max(r1, r2);
    g.wprime = std::min(r1, r2);
    g.pell_t = t;
    g.pell_u = u;
    g.epsilon = (t + u * std::sqrt(static_cast<double>(D0))) / 2.0;
    return g;
}

std::vector<QuadForm> enumerate_forms(i64 D, i64 a_max)
{
    std::vector<QuadForm> out;
    for (i64 a = 1; a <= a_max; ++a) {
        i64 m = 4 * a;
        for (i64 b = mod_pos(D, 2); b < 2 * a; b += 2) {
            if ((b * b - D) % m != 0) continue;
            i64 c = (b * b - D) / m;
            out.push_back({a, b, c});
            out.push_back({-a, b, -c});
        }
    }
    return out;
}

DiscriminantSplit make_split(i64 D, i64 d)
{
    require_positive_discriminant(D);
    if (!is_fundamental(d)) throw std::invalid_argument("d = " + std::to_string(d) + " is not a positive fundamental discriminant");
    if (D % d != 0 || !is_discriminant(D / d))
        throw std::invalid_argument("d = " + std::to_string(d) + " does not split D = " + std::to_string(D));
    return {D, d, D / d};
}

}  // namespace hypeis
