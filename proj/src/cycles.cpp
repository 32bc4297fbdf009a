#include "hypeis/cycles.hpp"

#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "hypeis/eiskernel.hpp"
#include "hypeis/exp_sums.hpp"
#include "hypeis/qseries.hpp"
#include "hypeis/specfun.hpp"
#include "hypeis/summation.hpp"
#include "quad128.hpp"

namespace hypeis {

namespace {

using q128::C128;
using q128::f128;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// d-window |cu + d| <= W_c, at most max(kWindowSlope c v, kWindowFloor)
constexpr double kWindowSlope = 8.0;
constexpr double kWindowFloor = 200.0;
// absolute accuracy aimed for when c and W_c are shrunk below their caps
constexpr double kNieburAbs = 1e-14;
// terms above this size are recomputed in binary128
constexpr double kQuadTerm = 1e-2;

struct CosetTables {
    int c_max = 0;
    std::vector<std::vector<int>> inv;  // inv[c][r] = r^{-1} mod c, -1 when gcd(r, c) > 1
};

const CosetTables& coset_tables(int c_max)
{
    static std::mutex mu;
    static std::vector<std::unique_ptr<CosetTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& t : cache)
        if (t->c_max >= c_max) return *t;
    auto t = std::make_unique<CosetTables>();
    t->c_max = c_max;
    t->inv.resize(c_max + 1);
    for (int c = 1; c <= c_max; ++c) {
        t->inv[c].assign(c, -1);
        for (int r = 0; r < c; ++r) {
            if (std::gcd(r, c) != 1) continue;
            long x0 = 1, x1 = 0, a = r, b = c;
            while (b != 0) {
                long qq = a / b;
                std::tie(a, b) = std::make_pair(b, a - qq * b);
                std::tie(x0, x1) = std::make_pair(x1, x0 - qq * x1);
            }
            t->inv[c][r] = static_cast<int>(((x0 % c) + c) % c);
        }
    }
    t->inv[1][0] = 0;
    cache.push_back(std::move(t));
    return *cache.back();
}

int mobius_mu(long n)
{
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

// Ramanujan sum c_c(m)
long ramanujan(long c, long m)
{
    long g = m == 0 ? c : std::gcd(c, m < 0 ? -m : m);
    long s = 0;
    for (long d = 1; d <= g; ++d)
        if (g % d == 0) s += mobius_mu(c / d) * d;
    return s;
}

// phi_m(y, s) = C_phi y^s sum_j (x^2/4)^j / (j! (s+1/2)_j), x = 2 pi |m| y
struct PhiKernel {
    i64 am;
    int s;
    double cphi;
    f128 cphi_q;

    PhiKernel(i64 m, int s_) : am(m < 0 ? -m : m), s(s_)
    {
        cphi_q = am == 0 ? 1 : 2 * powq(M_PIq, s + 0.5Q) * powq(f128(am), s) / tgammaq(s + 0.5Q);
        cphi = double(cphi_q);
    }

    double operator()(double y) const
    {
        if (am == 0) return std::pow(y, s);
        double x = 2.0 * kPi * am * y;
        if (x >= 30.0) return phi(am, y, s);
        double z = 0.25 * x * x, term = 1.0, sum = 1.0, nu1 = s + 0.5;
        for (int j = 1; j < 200; ++j) {
            term *= z / (j * (nu1 + j - 1));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return cphi * std::pow(y, s) * sum;
    }

    f128 quad(f128 y) const
    {
        f128 ys = powq(y, s);
        if (am == 0) return ys;
        f128 x = M_PIq * am * y, z = x * x, term = 1, sum = 1, nu1 = s + 0.5Q;
        for (int j = 1; j < 2000; ++j) {
            term *= z / (j * (nu1 + j - 1));
            sum += term;
            if (term < 1e-36Q * sum) break;
        }
        return cphi_q * ys * sum;
    }
};

// G_m(tau, s) for several m; terms larger than kQuadTerm are evaluated in binary128 from tau_q
void niebur_core(const std::vector<i64>& ms, C128 tau_q, int s, int c_max, std::vector<C128>& value,
                 std::vector<double>& tail)
{
    if (s < 2) throw std::invalid_argument("niebur_G needs integer s >= 2");
    if (!(tau_q.im > 0)) throw std::domain_error("niebur_G needs Im tau > 0");
    if (c_max < 0) throw std::invalid_argument("c_max must be >= 0");
    const double u = double(tau_q.re), v = double(tau_q.im);
    const size_t nm = ms.size();
    std::vector<PhiKernel> kern;
    int max_am = 0;
    for (i64 m : ms) {
        kern.emplace_back(m, s);
        max_am = std::max<int>(max_am, static_cast<int>(m < 0 ? -m : m));
    }
    std::vector<C128> big(nm);
    std::vector<CompensatedSum<cplx>> small(nm);
    std::vector<cplx> pw(max_am + 1), part(nm);
    std::vector<double> ph(nm);

    auto add_quad = [&](f128 y, f128 re) {
        for (size_t i = 0; i < nm; ++i) big[i] = big[i] + kern[i].quad(y) * q128::unit(f128(ms[i]) * re);
    };

    add_quad(tau_q.im, tau_q.re);

    double cmax_phi = 0;
    for (const auto& kr : kern) cmax_phi = std::max(cmax_phi, kr.cphi * double(std::max<i64>(kr.am, 1)));
    const double gfac = std::sqrt(kPi) * std::tgamma(s - 0.5) / std::tgamma(double(s));
    // |c_c(m)| <= |m|, so the c > C remainder is below |m| C_phi v^{1-s} gfac C^{1-2s}/(2s-1)
    int c_eff = std::min(c_max, 8);
    while (c_eff < c_max &&
           cmax_phi * std::pow(v, 1.0 - s) * gfac * std::pow(double(c_eff), 1.0 - 2 * s) / (2 * s - 1) > kNieburAbs)
        c_eff = std::min(c_max, 2 * c_eff);

    const CosetTables& tab = coset_tables(std::max(c_eff, 1));
    std::vector<double> window_tail(nm, 0.0);
    for (int c = 1; c <= c_eff; ++c) {
        const double cd = c, cv2 = cd * cd * v * v, cu = cd * u;
        // each c may leave kNieburAbs / c_eff outside its window
        double need = std::pow(2.0 * cmax_phi * std::pow(v, s) * c_eff / (cd * (2 * s - 1) * kNieburAbs), 1.0 / (2 * s - 1));
        const double W = std::clamp(need, 4.0 * cd * v + 10.0, std::max(kWindowSlope * cd * v, kWindowFloor));
        const long dlo = static_cast<long>(std::ceil(-W - cu)), dhi = static_cast<long>(std::floor(W - cu));
        const auto& inv = tab.inv[c];
        std::fill(part.begin(), part.end(), cplx(0));
        for (long d = dlo; d <= dhi; ++d) {
            long r = d % c;
            if (r < 0) r += c;
            int ai = inv[r];
            if (ai < 0) continue;
            double x = cu + d, den = x * x + cv2, y = v / den;
            double largest = 0;
            for (size_t i = 0; i < nm; ++i) {
                ph[i] = kern[i](y);
                largest = std::max(largest, ph[i]);
            }
            if (largest > kQuadTerm) {
                f128 xq = f128(c) * tau_q.re + f128(d);
                f128 dq = xq * xq + f128(c) * f128(c) * tau_q.im * tau_q.im;
                add_quad(tau_q.im / dq, f128(ai) / c - xq / (f128(c) * dq));
                continue;
            }
            cplx e1 = std::polar(1.0, 2.0 * kPi * (ai / cd - x / (cd * den)));
            pw[0] = 1.0;
            for (int j = 1; j <= max_am; ++j) pw[j] = pw[j - 1] * e1;
            for (size_t i = 0; i < nm; ++i) part[i] += ph[i] * (ms[i] >= 0 ? pw[ms[i]] : std::conj(pw[-ms[i]]));
        }
        for (size_t i = 0; i < nm; ++i) {
            small[i] += part[i];
            // dropped |x| > W, averaged over residues: (c_c(m)/c) C_phi v^s 2 W^{1-2s}/(2s-1)
            double rc = std::abs(double(ramanujan(c, ms[i]))) / cd;
            window_tail[i] += rc * kern[i].cphi * std::pow(v, s) * 2.0 * std::pow(W, 1.0 - 2 * s) / (2 * s - 1);
        }
    }

    value.resize(nm);
    tail.resize(nm);
    for (size_t i = 0; i < nm; ++i) {
        // c > c_eff: whole d-sums are (c_c(m)/c) C_phi v^s int (x^2 + c^2 v^2)^{-s} dx to leading order
        double amp = kern[i].cphi * std::pow(v, 1.0 - s) * gfac;
        double near = 0;
        long C4 = 4L * std::max(c_eff, 1);
        for (long c = c_eff + 1; c <= C4; ++c) near += double(ramanujan(c, ms[i])) * std::pow(double(c), -2.0 * s);
        double far = ms[i] == 0 ? std::pow(double(C4), 2.0 - 2 * s) / (2 * s - 2)
                                : double(kern[i].am) * std::pow(double(C4), 1.0 - 2 * s) / (2 * s - 1);
        value[i] = big[i] + q128::from(small[i].value());
        tail[i] = amp * (std::abs(near) + far) + window_tail[i];
    }
}

}  // namespace

double trace_one(const DiscriminantSplit& split, double tol)
{
    auto one = [](std::complex<double>) { return std::complex<double>(1.0); };
    return trace_cycle<double>(split, one, tol).real();
}

std::vector<NieburValue> niebur_G_multi(const std::vector<i64>& ms, std::complex<double> tau, int s, int c_max)
{
    std::vector<C128> v;
    std::vector<double> t;
    niebur_core(ms, q128::from(tau), s, c_max, v, t);
    std::vector<NieburValue> out;
    for (size_t i = 0; i < ms.size(); ++i) out.push_back({q128::to_double(v[i]), t[i]});
    return out;
}

NieburValue niebur_G(i64 m, std::complex<double> tau, int s, int c_max)
{
    return niebur_G_multi({m}, tau, s, c_max)[0];
}

namespace {

// trace of G_m(., s) for each m, in binary128, plus the largest pointwise series tail
struct NieburTrace {
    q128::Trace tr;
    std::vector<double> tail;
};

NieburTrace niebur_trace(const DiscriminantSplit& split, const std::vector<i64>& ms, int s, double tol, int c_max)
{
    NieburTrace r;
    r.tail.assign(ms.size(), 0.0);
    std::vector<double> t, noise;
    std::vector<C128> scratch;
    // the series tail is largest at the bottom of the fundamental domain
    niebur_core(ms, C128{0, sqrtq(3.0Q) / 2}, s, c_max, scratch, noise);
    auto f = [&](C128 z, std::vector<C128>& out) {
        // G is Gamma-invariant; the reduced point keeps Im tau >= sqrt(3)/2
        niebur_core(ms, q128::reduce(z), s, c_max, out, t);
        for (size_t i = 0; i < ms.size(); ++i) r.tail[i] = std::max(r.tail[i], t[i]);
    };
    r.tr = q128::trace(split, static_cast<int>(ms.size()), f, tol, noise);
    return r;
}

}  // namespace

BridgeCheck dit_bridge_check(const DiscriminantSplit& split, i64 m, int rho, double tol, int c_max, i64 a_max)
{
    if (m == 0) throw std::invalid_argument("bridge check needs m != 0");
    if (rho < 2) throw std::invalid_argument("bridge check needs rho >= 2");
    if (split.d == split.dprime) throw std::invalid_argument("bridge check needs d != d'");
    BridgeCheck r;

    NieburTrace nt = niebur_trace(split, {m}, rho, tol, c_max);
    double pre = std::tgamma(double(rho)) / (std::pow(2.0, rho) * std::pow(std::tgamma(rho / 2.0), 2));
    r.lhs = pre * double(nt.tr.value[0].re);
    r.lhs_err = pre * (double(nt.tr.error[0]) + nt.tail[0] * double(nt.tr.length));

    // sum over c = 4a: T_m(4a)/sqrt(4a) J_{rho-1/2}(4 pi |m| sqrt(D)/(4a)), smoothly cut at a_max
    const SalieTable& tab = salie_table(split, a_max);
    double am = static_cast<double>(m < 0 ? -m : m), sD = std::sqrt(double(split.D));
    auto partial = [&](i64 A) {
        CompensatedSum<double> acc;
        for (i64 a = 1; a < A; ++a) {
            double t = tab.T(m, a);
            if (t == 0) continue;
            acc += taper_weight(a, A) * t / (2.0 * std::sqrt(double(a))) * bessel_j_half(rho - 1, kPi * am * sD / double(a));
        }
        return acc.value();
    };
    double full = std::sqrt(2.0) * kPi * std::sqrt(am) * std::pow(double(split.D), 0.25);
    double sA = partial(a_max), sH = partial(a_max / 2);
    r.rhs = full * sA;
    r.rhs_err = full * std::abs(sA - sH);
    return r;
}

FaberTraces faber_traces(const DiscriminantSplit& split, int m_max, double tol)
{
    if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
    const QSeries& j1s = cached_series("j1", default_qseries_order());
    std::vector<f128> coef;
    for (const auto& c : j1s.c) coef.push_back(strtoflt128(c.str().c_str(), nullptr));
    const int val = j1s.val;

    auto j1 = [&](C128 z) {
        z = q128::reduce(z);
        f128 r = expq(-2 * M_PIq * z.im);
        C128 q = r * q128::unit(z.re);
        C128 acc{};
        for (size_t i = coef.size(); i-- > 0;) acc = acc * q + C128{coef[i], 0};
        C128 lead{1, 0};
        for (int i = 0; i < val; ++i) lead = lead * q;
        for (int i = 0; i > val; --i) lead = lead / q;
        return acc * lead;
    };
    // j_m(z) = sum_{ad = m} sum_{b mod d} j_1((az + b)/d)
    auto f = [&](C128 z, std::vector<C128>& out) {
        out.assign(m_max + 1, C128{});
        out[0] = {1, 0};
        for (int m = 1; m <= m_max; ++m)
            for (int a = 1; a <= m; ++a) {
                if (m % a != 0) continue;
                int d = m / a;
                for (int b = 0; b < d; ++b) out[m] = out[m] + j1((f128(a) * z + C128{f128(b), 0}) / C128{f128(d), 0});
            }
    };
    q128::Trace tr = q128::trace(split, m_max + 1, f, tol);

    FaberTraces r;
    for (int m = 0; m <= m_max; ++m) {
        r.trace.push_back(q128::to_double(tr.value[m]));
        r.error.push_back(double(tr.error[m]));
    }
    r.tr_one = r.trace[0].real();
    return r;
}

MainRhs rhs_theorem_main(const DiscriminantSplit& split, std::complex<double> tau, int m_max, double tol)
{
    if (m_max < 1) throw std::invalid_argument("m_max >= 1 required");
    if (tau.imag() <= 0) throw std::domain_error("Im tau must be positive");
    FaberTraces ft = faber_traces(split, m_max, tol);
    const double pre = -2.0 / std::sqrt(double(split.D));
    const double v = tau.imag();
    const cplx q = std::exp(cplx(0, 2 * kPi) * tau);
    MainRhs r;

    QEval<double> e2s = e2_star(tau);
    cplx qm = 1, s = 0;
    double err = 0;
    for (int m = 0; m <= m_max; ++m) {
        s += ft.trace[m] * qm;
        err += ft.error[m] * std::abs(qm);
        qm *= q;
    }
    r.value = pre * (s - ft.tr_one * e2s.value);
    r.error = std::abs(pre) * (err + ft.tr_one * e2s.tail);

    r.q0_coeff = pre * (ft.trace[0] - ft.tr_one * (1.0 - 3.0 / (kPi * v)));
    r.coeffs.push_back(pre * (ft.trace[0] - ft.tr_one));
    cplx byc = r.q0_coeff;
    qm = q;
    for (int m = 1; m <= m_max; ++m) {
        cplx cm = pre * (ft.trace[m] + 24.0 * double(divisor_sigma(1, m)) * ft.tr_one);
        r.coeffs.push_back(cm);
        byc += cm * qm;
        qm *= q;
    }
    r.value_by_coeffs = byc;
    return r;
}

VarRhs rhs_theorem_var(int k, const DiscriminantSplit& split, std::complex<double> tau, int m_max, double tol,
                       int c_max)
{
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("rhs_theorem_var needs even k >= 4");
    if (m_max < 1) throw std::invalid_argument("m_max >= 1 required");
    if (tau.imag() <= 0) throw std::domain_error("Im tau must be positive");
    std::vector<i64> ms;
    for (int m = 1; m <= m_max; ++m) ms.push_back(-m);
    NieburTrace nt = niebur_trace(split, ms, k / 2, tol, c_max);

    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    const double pre = sign * 2.0 * std::pow(kPi, k / 2.0) /
                       (std::pow(double(split.D), k / 4.0) * std::pow(std::tgamma(k / 4.0), 2));
    const cplx q = std::exp(cplx(0, 2 * kPi) * tau);
    VarRhs r;
    r.coeffs.push_back(0);
    r.coeff_err.push_back(0);
    cplx qm = q, s = 0;
    for (int m = 1; m <= m_max; ++m) {
        double mk = std::pow(double(m), k / 2.0 - 1);
        cplx cm = pre * mk * q128::to_double(nt.tr.value[m - 1]);
        double em = std::abs(pre) * mk * (double(nt.tr.error[m - 1]) + nt.tail[m - 1] * double(nt.tr.length));
        r.coeffs.push_back(cm);
        r.coeff_err.push_back(em);
        s += cm * qm;
        r.error += em * std::abs(qm);
        qm *= q;
    }
    r.value = s;
    return r;
}

}  // namespace hypeis
