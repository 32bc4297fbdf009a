#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace hypeis {

template <class Real>
struct GaussRule {
    std::vector<Real> x, w;
};

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1, 1].
template <class Real>
GaussRule<Real> gauss_jacobi(int n, Real alpha, Real beta)
{
    using std::sqrt;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    if (n < 1) throw std::invalid_argument("gauss rule needs n >= 1");
    Mat J = Mat::Zero(n, n);
    Real ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        Real s = 2 * k + ab;
        J(k, k) = k == 0 ? (beta - alpha) / (ab + 2) : (beta * beta - alpha * alpha) / (s * (s + 2));
        if (k + 1 < n) {
            Real j = k + 1;
            Real t = 2 * j + ab;
            Real off = sqrt(4 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1) * (t - 1)));
            J(k, k + 1) = J(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    Real mu0 = std::exp((ab + 1) * std::log(Real(2)) + std::lgamma(alpha + 1) + std::lgamma(beta + 1) -
                        std::lgamma(ab + 2));
    GaussRule<Real> r;
    for (int k = 0; k < n; ++k) {
        r.x.push_back(es.eigenvalues()(k));
        Real v = es.eigenvectors()(0, k);
        r.w.push_back(mu0 * v * v);
    }
    return r;
}

// Gauss-Legendre on [-1, 1], eigenvalue start polished by Newton on the Legendre recurrence.
template <class Real>
GaussRule<Real> gauss_legendre(int n)
{
    GaussRule<Real> r = gauss_jacobi<Real>(n, Real(0), Real(0));
    for (int k = 0; k < n; ++k) {
        Real x = r.x[k], dp = 0;
        for (int it = 0; it < 3; ++it) {
            Real p0 = 1, p1 = x;
            for (int j = 2; j <= n; ++j) {
                Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            x -= p1 / dp;
        }
        r.x[k] = x;
        r.w[k] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

// int_0^1 t^beta f(t) dt = sum w_k f(x_k)
template <class Real>
GaussRule<Real> gauss_jacobi01(int n, Real beta)
{
    GaussRule<Real> r = gauss_jacobi<Real>(n, Real(0), beta);
    Real scale = std::exp(-(beta + 1) * std::log(Real(2)));
    for (int k = 0; k < n; ++k) {
        r.x[k] = (r.x[k] + 1) / 2;
        r.w[k] *= scale;
    }
    return r;
}

const GaussRule<double>& legendre_rule_double(int n);
const GaussRule<long double>& legendre_rule_long(int n);

template <class Real>
const GaussRule<Real>& legendre_rule(int n)
{
    if constexpr (std::is_same_v<Real, double>)
        return legendre_rule_double(n);
    else
        return legendre_rule_long(n);
}

struct QuadResult {
    std::complex<double> value;
    double error = 0;
    double l1 = 0;
    int evaluations = 0;
};

// Globally adaptive bisection; each panel compares 10- and 20-point Gauss rules.
// Stops when the summed error estimate is below max(abs_tol, rel_tol * L1).
template <class F>
QuadResult adaptive_integrate(F&& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                              int max_panels = 20000)
{
    const auto& g10 = legendre_rule_double(10);
    const auto& g20 = legendre_rule_double(20);
    struct Panel {
        double a, b;
        std::complex<double> val;
        double err, l1;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    int evals = 0;
    auto eval = [&](double a, double b) {
        double h = 0.5 * (b - a), c = 0.5 * (a + b);
        std::complex<double> s10 = 0, s20 = 0;
        double l1 = 0;
        for (size_t k = 0; k < g10.x.size(); ++k) s10 += g10.w[k] * f(c + h * g10.x[k]);
        for (size_t k = 0; k < g20.x.size(); ++k) {
            auto v = f(c + h * g20.x[k]);
            s20 += g20.w[k] * v;
            l1 += g20.w[k] * std::abs(v);
        }
        evals += 30;
        return Panel{a, b, h * s20, std::abs(h * (s20 - s10)), std::abs(h) * l1};
    };
    std::priority_queue<Panel> pq;
    std::complex<double> total = 0;
    double err = 0, l1 = 0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        Panel p = eval(breaks[i], breaks[i + 1]);
        total += p.val;
        err += p.err;
        l1 += p.l1;
        pq.push(p);
    }
    while (err > std::max(abs_tol, rel_tol * l1) && static_cast<int>(pq.size()) < max_panels) {
        Panel p = pq.top();
        pq.pop();
        double m = 0.5 * (p.a + p.b);
        Panel lo = eval(p.a, m), hi = eval(m, p.b);
        total += lo.val + hi.val - p.val;
        err += lo.err + hi.err - p.err;
        l1 += lo.l1 + hi.l1 - p.l1;
        pq.push(lo);
        pq.push(hi);
    }
    // re-add the panel values in a fixed order for a reproducible total
    std::vector<Panel> all;
    while (!pq.empty()) {
        all.push_back(pq.top());
        pq.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    std::complex<double> sum = 0;
    double esum = 0, lsum = 0;
    for (const auto& p : all) {
        sum += p.val;
        esum += p.err;
        lsum += p.l1;
    }
    return {sum, esum, lsum, evals};
}

}  // namespace hypeis
