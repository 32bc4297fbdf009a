#include "hypeis/eiskernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypeis/cycles.hpp"
#include "hypeis/exp_sums.hpp"
#include "hypeis/genus.hpp"
#include "hypeis/specfun.hpp"
#include "hypeis/summation.hpp"

namespace hypeis {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require_weight(int k)
{
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("weight k must be even and >= 2");
}

cplx ipow(cplx z, int n)
{
    if (n < 0) return 1.0 / ipow(z, -n);
    cplx r = 1;
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

// Per translation orbit {Q o T^n}: explicit terms near the orbit centre, Gauss-Jacobi tails
// with one Euler-Maclaurin correction.
constexpr int kOrbitHalfWidth = 32;
constexpr int kTailNodes = 16;

class OrbitSummer {
public:
    OrbitSummer(int k, double s, cplx tau)
        : h_(k / 2), s_(s), tau_(tau), vs_(std::pow(tau.imag(), s)),
          rule_(gauss_jacobi01<double>(kTailNodes, k + 2 * s - 2))
    {
    }

    cplx term(const QuadForm& q, cplx z) const
    {
        cplx Q = eval_form(q, z);
        cplx r = vs_ / ipow(Q, h_);
        if (s_ != 0) r *= std::pow(std::norm(Q), -0.5 * s_);
        return (q.a < 0 && h_ % 2 == 1) ? -r : r;
    }

    cplx derivative(const QuadForm& q, cplx z) const
    {
        cplx Q = eval_form(q, z), dQ = 2.0 * double(q.a) * z + double(q.b);
        cplx ratio = dQ / Q;
        return term(q, z) * (-double(h_) * ratio - s_ * ratio.real());
    }

    cplx orbit(const QuadForm& q) const
    {
        const double centre = std::round(-double(q.b) / (2.0 * double(q.a)) - tau_.real());
        cplx acc = 0;
        for (int n = -kOrbitHalfWidth; n <= kOrbitHalfWidth; ++n) acc += term(q, tau_ + (centre + n));
        const double X = kOrbitHalfWidth + 0.5;
        const double beta = 2 * h_ + 2 * s_ - 2;
        for (int sgn : {1, -1}) {
            cplx tail = 0;
            for (size_t i = 0; i < rule_.x.size(); ++i) {
                double t = rule_.x[i];
                double y = sgn * X / t;
                tail += rule_.w[i] * term(q, tau_ + (centre + y)) * (X * std::pow(t, -2.0 - beta));
            }
            acc += tail + double(sgn) * derivative(q, tau_ + (centre + sgn * X)) / 24.0;
        }
        return acc;
    }

private:
    int h_;
    double s_;
    cplx tau_;
    double vs_;
    GaussRule<double> rule_;
};

constexpr int kCheckpoints = 40;
constexpr double kFitResidualFactor = 2.0;
constexpr double kExtrapolationFactor = 0.1;

LatticeSum lattice_sum(int k, i64 D, const std::vector<double>& class_weight, cplx tau, double s, i64 a_max,
                       double tol)
{
    require_weight(k);
    if (tau.imag() <= 0) throw std::domain_error("Im tau must be positive");
    if (k == 2 && s <= 0) throw std::invalid_argument("the weight-2 lattice sum needs s > 0");
    if (s <= 1.0 - k / 2.0) throw std::invalid_argument("s must exceed 1 - k/2");
    if (a_max < 8) throw std::invalid_argument("a_max must be at least 8");

    ClassIndex idx(D);
    OrbitSummer orbit(k, s, tau);

    std::vector<i64> checkpoints;
    for (int i = 0; i < kCheckpoints; ++i) {
        double t = double(i) / (kCheckpoints - 1);
        i64 a = static_cast<i64>(std::llround(a_max / 4.0 * std::pow(4.0, t)));
        if (checkpoints.empty() || a > checkpoints.back()) checkpoints.push_back(a);
    }
    std::vector<cplx> at_checkpoint;

    CompensatedSum<cplx> acc;
    size_t next = 0;
    const auto forms = enumerate_forms(D, a_max);
    const bool one_class = idx.reps().size() == 1;
    for (size_t i = 0; i < forms.size(); ++i) {
        const QuadForm& q = forms[i];
        double w = class_weight[one_class ? 0 : idx.class_of(q)];
        if (w != 0) acc += w * orbit.orbit(q);
        i64 aa = q.a < 0 ? -q.a : q.a;
        i64 next_a = i + 1 == forms.size() ? a_max + 1 : std::abs(forms[i + 1].a);
        if (next_a == aa) continue;
        // acc now equals S(x) for aa <= x < next_a
        while (next < checkpoints.size() && checkpoints[next] < next_a) {
            at_checkpoint.push_back(acc.value());
            ++next;
        }
    }
    while (next < checkpoints.size()) {
        at_checkpoint.push_back(acc.value());
        ++next;
    }

    // S(a) = S_inf - C a^{-e}
    const double e = k / 2.0 + s - 1.0;
    const int n = static_cast<int>(checkpoints.size());
    Eigen::MatrixXcd A(n, 2);
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = -std::pow(double(checkpoints[i]), -e);
        b(i) = at_checkpoint[i];
    }
    Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(b);
    double rms = std::sqrt((A * sol - b).squaredNorm() / n);

    LatticeSum r;
    r.partial = acc.value();
    r.value = sol(0);
    r.a_max = a_max;
    r.uncertainty = kFitResidualFactor * rms + kExtrapolationFactor * std::abs(r.value - r.partial);
    r.tail_oversized = r.uncertainty > tol * std::max(1.0, std::abs(r.value));
    return r;
}

}  // namespace

LatticeSum direct_eis(int k, const QuadForm& q, std::complex<double> tau, double s, i64 a_max, double tol)
{
    i64 D = discriminant(q);
    require_positive_discriminant(D);
    ClassIndex idx(D);
    std::vector<double> w(idx.reps().size(), 0.0);
    w[idx.class_of(q)] = 1.0;
    return lattice_sum(k, D, w, tau, s, a_max, tol);
}

LatticeSum twisted_eis(int k, const DiscriminantSplit& split, std::complex<double> tau, double s, i64 a_max,
                       double tol)
{
    ClassIndex idx(split.D);
    std::vector<double> w;
    for (const auto& q : idx.reps()) w.push_back(genus_character(split, q));
    return lattice_sum(k, split.D, w, tau, s, a_max, tol);
}

double laplace_bessel(int k, i64 m, double lambda)
{
    require_weight(k);
    if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
    if (m <= 0) return 0.0;
    const int rho = k / 2;
    return std::sqrt(kPi) / std::tgamma(double(rho)) * std::pow(kPi * double(m) / lambda, rho - 0.5) *
           bessel_j_half(rho - 1, 2 * kPi * lambda * double(m));
}

namespace {

constexpr double kContourCutoff = 40.0;
constexpr int kCauchyPoints = 64;
constexpr int kMaxIbpTerms = 24;

// int_{t0}^{t0 + dir * i inf} e^{alpha t} F(t) dt by repeated integration by parts
template <class F>
std::pair<cplx, double> ibp_tail(F&& f, cplx t0, double alpha, double radius)
{
    std::vector<cplx> taylor(kMaxIbpTerms, 0.0);
    for (int j = 0; j < kCauchyPoints; ++j) {
        cplx om = std::polar(1.0, 2 * kPi * j / kCauchyPoints);
        cplx fv = f(t0 + radius * om);
        cplx z = 1.0 / (radius * om), zp = 1.0;
        for (int p = 0; p < kMaxIbpTerms; ++p) {
            taylor[p] += fv * zp;
            zp *= z;
        }
    }
    cplx sum = 0;
    double fact = 1, last = 0;
    for (int p = 0; p < kMaxIbpTerms; ++p) {
        if (p > 0) fact *= p;
        cplx term = (p % 2 == 0 ? 1.0 : -1.0) * fact * (taylor[p] / double(kCauchyPoints)) / std::pow(alpha, p + 1);
        if (p > 2 && std::abs(term) > last) break;
        sum += term;
        last = std::abs(term);
        if (last < 1e-18 * std::abs(sum)) break;
    }
    return {std::exp(alpha * t0) * sum, std::abs(std::exp(alpha * t0)) * last};
}

}  // namespace

QuadResult contour_cm(int k, i64 m, double lambda, double v, double s, double tol)
{
    require_weight(k);
    if (v <= 0) throw std::invalid_argument("contour abscissa v must be positive");
    if (lambda == 0) throw std::invalid_argument("lambda must be nonzero");
    if (k + 2 * s <= 1) throw std::invalid_argument("contour integral needs k + 2s > 1");
    const double l = std::abs(lambda), l2 = l * l, alpha = 2 * kPi * double(m);
    const int h = k / 2;

    auto F = [&](cplx t) {
        cplx p = t * t + l2;
        cplx r = ipow(p, -h);
        if (s != 0) {
            cplx t2 = 2.0 * v - t;
            r *= std::pow(p * (t2 * t2 + l2), -0.5 * s);
        }
        return r;
    };
    auto line = [&](double x) {
        cplx t(v, x);
        return cplx(0, 1) * std::exp(alpha * t) * F(t);
    };

    const double X = std::max({kContourCutoff, 10 * l, 10 * v});
    const double hmax = 0.5 / std::max<double>(1.0, std::abs(double(m)));
    const int panels = static_cast<int>(std::ceil(2 * X / hmax));
    std::vector<double> breaks;
    for (int i = 0; i <= panels; ++i) breaks.push_back(-X + 2 * X * i / panels);
    breaks.push_back(l);
    breaks.push_back(-l);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    QuadResult r = adaptive_integrate(line, breaks, 0.0, tol);

    if (m != 0) {
        auto [up, eu] = ibp_tail(F, cplx(v, X), alpha, X / 4);
        auto [lo, el] = ibp_tail(F, cplx(v, -X), alpha, X / 4);
        // upper tail runs away from t0, lower tail runs into t1
        r.value += -up + lo;
        r.error += eu + el;
        r.l1 += std::abs(up) + std::abs(lo);
    } else {
        const double beta = k + 2 * s - 2;
        auto tails = [&](int nodes) {
            GaussRule<double> g = gauss_jacobi01<double>(nodes, beta);
            cplx acc = 0;
            for (int sgn : {1, -1})
                for (int i = 0; i < nodes; ++i) {
                    double u = g.x[i];
                    acc += g.w[i] * line(sgn * X / u) * (X * std::pow(u, -2.0 - beta));
                }
            return acc;
        };
        cplx t24 = tails(24), t16 = tails(16);
        r.value += t24;
        r.error += std::abs(t24 - t16);
        r.l1 += std::abs(t24);
    }
    return r;
}

double taper_weight(i64 a, i64 a_max)
{
    if (a < 1 || a >= a_max) return 0.0;
    const i64 half = a_max / 2;
    if (a <= half) return 1.0;
    double c = std::cos(0.5 * kPi * double(a - half) / double(a_max - half));
    return c * c;
}

FourierCoeff fourier_coeff_bessel(int k, const DiscriminantSplit& split, i64 m, i64 a_max)
{
    require_weight(k);
    if (m < 1) throw std::invalid_argument("fourier_coeff_bessel needs m >= 1");
    if (a_max < 4) throw std::invalid_argument("a_max must be at least 4");
    const SalieTable& tab = salie_table(split, a_max);
    const int n = k / 2 - 1;
    const double arg = kPi * double(m) * std::sqrt(double(split.D));
    auto partial = [&](i64 A) {
        CompensatedSum<double> acc;
        for (i64 a = 1; a < A; ++a) {
            double t = tab.T(m, a);
            if (t == 0) continue;
            acc += taper_weight(a, A) * t / std::sqrt(double(a)) * bessel_j_half(n, arg / double(a));
        }
        return acc.value();
    };
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    const double pre = sign * std::pow(2.0, (k + 1) / 2.0) * std::pow(kPi, k / 2.0 + 1) *
                       std::pow(double(m), (k - 1) / 2.0) /
                       (std::pow(double(split.D), (k - 1) / 4.0) * std::tgamma(k / 2.0));
    double sA = partial(a_max), sH = partial(a_max / 2);
    return {pre * sA, std::abs(pre) * std::abs(sA - sH), a_max};
}

double constant_term_k2(const DiscriminantSplit& split, double v, double tol)
{
    if (v <= 0) throw std::invalid_argument("v must be positive");
    return -2.0 / std::sqrt(double(split.D)) * trace_one(split, tol) * 3.0 / (kPi * v);
}

FourierTable fourier_table(int k, const DiscriminantSplit& split, int m_max, i64 a_max)
{
    require_weight(k);
    if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
    FourierTable t;
    t.k = k;
    t.split = split;
    t.a_max = a_max;
    t.coeffs.push_back(0.0);
    t.trunc_err.push_back(0.0);
    for (int m = 1; m <= m_max; ++m) {
        FourierCoeff c = fourier_coeff_bessel(k, split, m, a_max);
        t.coeffs.push_back(c.value);
        t.trunc_err.push_back(c.tail);
    }
    if (k == 2) t.const_times_v = constant_term_k2(split, 1.0);
    return t;
}

FourierValue fourier_eval(const FourierTable& t, std::complex<double> tau)
{
    if (tau.imag() <= 0) throw std::domain_error("Im tau must be positive");
    const cplx q = std::exp(cplx(0, 2 * kPi) * tau);
    const double aq = std::abs(q);
    FourierValue r;
    cplx qm = 1;
    for (size_t m = 0; m < t.coeffs.size(); ++m) {
        r.value += t.coeffs[m] * qm;
        r.tail += t.trunc_err[m] * std::abs(qm);
        qm *= q;
    }
    // omitted m > M, assuming the last coefficient size persists
    if (!t.coeffs.empty()) r.tail += std::abs(t.coeffs.back()) * std::abs(qm) / (1 - aq);
    if (t.k == 2) r.value += t.const_times_v / tau.imag();
    return r;
}

FourierValue fourier_eval(int k, const DiscriminantSplit& split, std::complex<double> tau, double s, int m_max,
                          i64 a_max)
{
    if (s != 0) throw std::invalid_argument("the Fourier side is evaluated at s = 0 only");
    return fourier_eval(fourier_table(k, split, m_max, a_max), tau);
}

}  // namespace hypeis
