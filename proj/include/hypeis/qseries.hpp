#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypeis/qforms.hpp"

namespace hypeis {

using BigInt = boost::multiprecision::cpp_int;

// Laurent series sum_{n = val}^{order} c_n q^n with exact integer coefficients.
struct QSeries {
    int val = 0;
    int order = 0;
    std::vector<BigInt> c;  // c[i] multiplies q^{val + i}

    static QSeries constant(const BigInt& v, int order);
    static QSeries monomial(int n, int order);
    BigInt coeff(int n) const;
    QSeries truncated(int new_order) const;
};

QSeries operator+(const QSeries& f, const QSeries& g);
QSeries operator-(const QSeries& f, const QSeries& g);
QSeries operator*(const QSeries& f, const QSeries& g);
QSeries operator*(const BigInt& k, const QSeries& f);
QSeries divide_exact(const QSeries& f, const BigInt& k);
QSeries inverse(const QSeries& f);
QSeries power(const QSeries& f, int e);

QSeries eisenstein_qexp(int k, int N);
QSeries delta_qexp(int N);
QSeries j_qexp(int N);
QSeries d_operator(const QSeries& f);
QSeries faber_jm(int m, int N);
// sum_{a | gcd(m, n)} (m/a) c(mn/a^2): leading term q^{-m} for f = q^{-1} + ...
QSeries hecke_normalized(const QSeries& f, int m, int N);

struct QSeriesTailError : std::runtime_error {
    double bound;
    QSeriesTailError(double b)
        : std::runtime_error("q-series tail bound " + std::to_string(b) + " exceeds tolerance"), bound(b)
    {
    }
};

template <class Real>
struct QEval {
    std::complex<Real> value;
    Real tail = 0;
};

// Floating-point copy of a QSeries for repeated evaluation.
template <class Real>
class NumericQSeries {
public:
    NumericQSeries() = default;
    explicit NumericQSeries(const QSeries& f) : val_(f.val), order_(f.order)
    {
        for (const auto& x : f.c) c_.push_back(x.template convert_to<Real>());
        // geometric growth of the last coefficients, used for the tail bound
        int n = static_cast<int>(c_.size());
        Real hi = 0, lo = 0;
        for (int i = std::max(0, n - 4); i < n; ++i) hi = std::max(hi, std::abs(c_[i]));
        for (int i = std::max(0, n - 8); i < std::max(0, n - 4); ++i) lo = std::max(lo, std::abs(c_[i]));
        last_ = hi;
        growth_ = (hi > 0 && lo > 0) ? std::max(Real(1), std::pow(hi / lo, Real(0.25))) : Real(1);
    }

    QEval<Real> eval(std::complex<Real> tau) const
    {
        if (tau.imag() <= 0) throw std::domain_error("q-series evaluation needs Im tau > 0");
        const Real two_pi = 2 * std::numbers::pi_v<Real>;
        std::complex<Real> q = std::exp(std::complex<Real>(0, two_pi) * tau);
        std::complex<Real> s = 0;
        for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) s = s * q + c_[i];
        Real aq = std::abs(q);
        std::complex<Real> lead = val_ == 0 ? std::complex<Real>(1) : std::pow(q, val_);
        Real r = aq * growth_;
        Real tail = last_ == 0 ? Real(0)
                    : r >= 1   ? std::numeric_limits<Real>::infinity()
                               : last_ * std::pow(aq, Real(order_ + 1)) * growth_ / (1 - r);
        return {s * lead, tail};
    }

    int order() const { return order_; }

private:
    int val_ = 0, order_ = 0;
    std::vector<Real> c_;
    Real last_ = 0, growth_ = 1;
};

template <class Real>
QEval<Real> eval_qseries(const QSeries& f, std::complex<Real> tau,
                         Real tol = std::numeric_limits<Real>::infinity())
{
    QEval<Real> r = NumericQSeries<Real>(f).eval(tau);
    if (r.tail > tol) throw QSeriesTailError(static_cast<double>(r.tail));
    return r;
}

// Shared series at the configured truncation order.
int default_qseries_order();
void set_default_qseries_order(int N);
const QSeries& cached_series(const std::string& name, int N);  // "E2", "E4", "E6", "Delta", "j", "Dj", "j1"
template <class Real>
const NumericQSeries<Real>& cached_numeric(const std::string& name, int N);

// j(z) - 744 through reduction to the fundamental domain
template <class Real>
std::complex<Real> j1_value(std::complex<Real> z, int N = default_qseries_order())
{
    const auto& s = cached_numeric<Real>("j1", N);
    return s.eval(reduce_to_fundamental(z)).value;
}

// j_m(z) = sum_{ad = m} sum_{b mod d} j_1((az + b)/d)
template <class Real>
std::complex<Real> jm_value(int m, std::complex<Real> z, int N = default_qseries_order())
{
    if (m < 0) throw std::invalid_argument("jm_value needs m >= 0");
    if (m == 0) return 1;
    std::complex<Real> s = 0;
    for (int a = 1; a <= m; ++a) {
        if (m % a != 0) continue;
        int d = m / a;
        for (int b = 0; b < d; ++b) s += j1_value<Real>((Real(a) * z + Real(b)) / Real(d), N);
    }
    return s;
}

QEval<double> e2_star(std::complex<double> tau, int N = default_qseries_order(),
                      double tol = std::numeric_limits<double>::infinity());

struct AknResult {
    std::complex<double> direct;
    std::complex<double> series;
    double last_term = 0;  // |j_M(w) q^M|
    bool series_converged = true;
};

AknResult akn_kernel(std::complex<double> tau, std::complex<double> w, int M, int N = default_qseries_order());

}  // namespace hypeis
