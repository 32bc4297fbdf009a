#include "hypeis/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypeis {

namespace {

double series(double nu, double x, double sign)
{
    double h = 0.5 * x;
    double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
    double sum = term;
    double h2 = sign * h * h;
    for (int j = 1; j < 500; ++j) {
        term *= h2 / (j * (j + nu));
        sum += term;
        if (j > h && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double bessel_j_series(double nu, double x) { return series(nu, x, -1.0); }
double bessel_i_series(double nu, double x) { return series(nu, x, 1.0); }

double bessel_j_half(int n, double x)
{
    if (x <= 0) throw std::domain_error("bessel_j_half needs x > 0");
    if (n < 0) throw std::domain_error("bessel_j_half needs n >= 0");
    // upward recurrence cancels when the order exceeds x
    if (n > 0 && x < n + 2) return bessel_j_series(n + 0.5, x);
    double pre = std::sqrt(2.0 / (std::numbers::pi * x));
    double jm = pre * std::cos(x), j = pre * std::sin(x);
    for (int k = 0; k < n; ++k) {
        double mu = k + 0.5;
        double jn = (2.0 * mu / x) * j - jm;
        jm = j;
        j = jn;
    }
    return j;
}

double bessel_i_half(int n, double x)
{
    if (x <= 0) throw std::domain_error("bessel_i_half needs x > 0");
    if (n < 0) throw std::domain_error("bessel_i_half needs n >= 0");
    // the positive-term series is exact in floating point; recurrence only far from the turning point
    if (x < 30.0 || x < 2.0 * n * n) return bessel_i_series(n + 0.5, x);
    double pre = std::sqrt(2.0 / (std::numbers::pi * x));
    double im = pre * std::cosh(x), i = pre * std::sinh(x);
    for (int k = 0; k < n; ++k) {
        double mu = k + 0.5;
        double in = im - (2.0 * mu / x) * i;
        im = i;
        i = in;
    }
    return i;
}

double phi(std::int64_t m, double y, int s)
{
    if (y <= 0) throw std::domain_error("phi needs y > 0");
    if (s < 1) throw std::domain_error("phi needs s >= 1");
    if (m == 0) return std::pow(y, s);
    double am = static_cast<double>(m < 0 ? -m : m);
    return 2.0 * std::numbers::pi * std::sqrt(am * y) * bessel_i_half(s - 1, 2.0 * std::numbers::pi * am * y);
}

std::int64_t divisor_sigma(int r, std::int64_t m)
{
    if (m < 1) throw std::domain_error("divisor_sigma needs m >= 1");
    std::int64_t s = 0;
    for (std::int64_t d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        std::int64_t p = 1;
        for (int k = 0; k < r; ++k) p *= d;
        s += p;
    }
    return s;
}

}  // namespace hypeis
