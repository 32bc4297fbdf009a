#pragma once

// binary128 helpers for cycle integrals whose integrands are exponentially
// larger than their integrals (j_m and G_{-m} along a geodesic)

#include <quadmath.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hypeis/cycles.hpp"
#include "hypeis/genus.hpp"
#include "hypeis/qforms.hpp"

namespace hypeis::q128 {

using f128 = __float128;

struct C128 {
    f128 re = 0, im = 0;
};

inline C128 operator+(C128 a, C128 b) { return {a.re + b.re, a.im + b.im}; }
inline C128 operator-(C128 a, C128 b) { return {a.re - b.re, a.im - b.im}; }
inline C128 operator*(C128 a, C128 b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline C128 operator*(f128 x, C128 a) { return {x * a.re, x * a.im}; }
inline C128 operator/(C128 a, C128 b)
{
    f128 n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
inline f128 abs(C128 a) { return hypotq(a.re, a.im); }
inline C128 from(std::complex<double> z) { return {z.real(), z.imag()}; }
inline std::complex<double> to_double(C128 z) { return {double(z.re), double(z.im)}; }
// e^{2 pi i t}
inline C128 unit(f128 t)
{
    t -= floorq(t);
    f128 th = 2 * M_PIq * t;
    return {cosq(th), sinq(th)};
}

inline C128 reduce(C128 z)
{
    for (int iter = 0; iter < 10000; ++iter) {
        z.re -= floorq(z.re + 0.5Q);
        if (z.re * z.re + z.im * z.im < 1 - 1e-30Q)
            z = C128{-1, 0} / z;
        else
            break;
    }
    return z;
}

struct Rule {
    std::vector<f128> x, w;
};

inline Rule legendre(int n)
{
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int k = 0; k < n; ++k) {
        f128 x = cosq(M_PIq * (k + 0.75Q) / (n + 0.5Q)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            f128 p0 = 1, p1 = x;
            for (int j = 2; j <= n; ++j) {
                f128 p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            f128 dx = p1 / dp;
            x -= dx;
            if (fabsq(dx) < 1e-33Q) break;
        }
        r.x[k] = x;
        r.w[k] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

struct Trace {
    std::vector<C128> value;
    std::vector<f128> error;
    f128 length = 0;  // total length of the cycles with chi != 0
};

// sum_Q chi_d(Q) int_0^{2 log eps} f(sigma_Q(i e^l)) dl for a vector integrand of size M,
// composite Gauss-Legendre with panel doubling; noise[m] is a pointwise error of f already
// present, so refinement stops once panel changes fall below noise[m] times the cycle length
template <class F>
Trace trace(const DiscriminantSplit& split, int M, F&& f, double tol, const std::vector<double>& noise = {},
            int nodes = 32, int max_panels = 64)
{
    static const Rule rule = legendre(32);
    if (nodes != 32) throw std::invalid_argument("binary128 traces use 32 nodes per panel");
    Trace out;
    out.value.assign(M, C128{});
    out.error.assign(M, 0);
    std::vector<C128> vals;
    for (const auto& q : class_reps(split.D)) {
        int chi = genus_character(split, q);
        if (chi == 0) continue;
        Geodesic g = geodesic(q);
        i64 g0 = content(q) < 0 ? -content(q) : content(q);
        f128 sD = sqrtq(f128(discriminant(q)));
        f128 r1 = (f128(-q.b) + sD) / (2 * f128(q.a)), r2 = (f128(-q.b) - sD) / (2 * f128(q.a));
        f128 w = std::max(r1, r2), wp = std::min(r1, r2);
        f128 eps = (f128(g.pell_t) + f128(g.pell_u) * sqrtq(f128(discriminant(q) / (g0 * g0)))) / 2;
        f128 len = 2 * logq(eps);
        out.length += len;

        std::vector<C128> prev;
        for (int panels = 1;; panels *= 2) {
            f128 h = len / panels;
            std::vector<C128> sum(M);
            std::vector<f128> l1(M, 0);
            for (int p = 0; p < panels; ++p) {
                f128 c = (p + 0.5Q) * h;
                for (int k = 0; k < nodes; ++k) {
                    f128 l = c + 0.5Q * h * rule.x[k], wk = 0.5Q * h * rule.w[k];
                    C128 z{0, expq(l)};
                    f((C128{w, 0} * z + C128{wp, 0}) / (z + C128{1, 0}), vals);
                    for (int m = 0; m < M; ++m) {
                        sum[m] = sum[m] + wk * vals[m];
                        l1[m] += wk * abs(vals[m]);
                    }
                }
            }
            if (!prev.empty()) {
                bool ok = true;
                std::vector<f128> diff(M);
                for (int m = 0; m < M; ++m) {
                    // below the rounding floor of the L1 mass no refinement can help
                    f128 floor = 1e-31Q * l1[m];
                    diff[m] = abs(sum[m] - prev[m]) + floor;
                    f128 accept = std::max(f128(tol) * std::max<f128>(1, abs(sum[m])), 10 * floor);
                    if (m < static_cast<int>(noise.size())) accept = std::max(accept, f128(noise[m]) * len);
                    ok = ok && diff[m] <= accept;
                }
                if (ok) {
                    for (int m = 0; m < M; ++m) {
                        out.value[m] = out.value[m] + f128(chi) * sum[m];
                        out.error[m] += diff[m];
                    }
                    break;
                }
                if (2 * panels > max_panels) {
                    f128 worst = 0;
                    for (f128 x : diff) worst = std::max(worst, x);
                    throw QuadratureFailure("cycle integral did not converge", double(worst));
                }
            }
            prev = std::move(sum);
        }
    }
    return out;
}

}  // namespace hypeis::q128
