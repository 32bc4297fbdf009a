#include "hypeis/qseries.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "hypeis/specfun.hpp"

namespace hypeis {

QSeries QSeries::constant(const BigInt& v, int order)
{
    QSeries f;
    f.val = 0;
    f.order = order;
    f.c.assign(order + 1, BigInt(0));
    f.c[0] = v;
    return f;
}

QSeries QSeries::monomial(int n, int order)
{
    QSeries f;
    f.val = n;
    f.order = order;
    f.c.assign(order - n + 1, BigInt(0));
    f.c[0] = 1;
    return f;
}

BigInt QSeries::coeff(int n) const
{
    if (n > order) throw std::out_of_range("coefficient beyond truncation order");
    if (n < val) return 0;
    return c[n - val];
}

QSeries QSeries::truncated(int new_order) const
{
    if (new_order > order) throw std::invalid_argument("cannot extend truncation order");
    QSeries f = *this;
    f.order = new_order;
    f.c.resize(std::max(0, new_order - val + 1));
    return f;
}

namespace {

QSeries combine(const QSeries& f, const QSeries& g, int sign)
{
    QSeries h;
    h.val = std::min(f.val, g.val);
    h.order = std::min(f.order, g.order);
    h.c.assign(std::max(0, h.order - h.val + 1), BigInt(0));
    for (int n = h.val; n <= h.order; ++n) {
        h.c[n - h.val] = f.coeff(n);
        if (sign > 0)
            h.c[n - h.val] += g.coeff(n);
        else
            h.c[n - h.val] -= g.coeff(n);
    }
    return h;
}

}  // namespace

QSeries operator+(const QSeries& f, const QSeries& g) { return combine(f, g, 1); }
QSeries operator-(const QSeries& f, const QSeries& g) { return combine(f, g, -1); }

QSeries operator*(const QSeries& f, const QSeries& g)
{
    QSeries h;
    h.val = f.val + g.val;
    h.order = std::min(f.order + g.val, g.order + f.val);
    int len = h.order - h.val + 1;
    h.c.assign(std::max(0, len), BigInt(0));
    for (int i = 0; i < len; ++i) {
        BigInt s = 0;
        for (int j = 0; j <= i; ++j) {
            if (j >= static_cast<int>(f.c.size()) || i - j >= static_cast<int>(g.c.size())) continue;
            s += f.c[j] * g.c[i - j];
        }
        h.c[i] = s;
    }
    return h;
}

QSeries operator*(const BigInt& k, const QSeries& f)
{
    QSeries h = f;
    for (auto& x : h.c) x *= k;
    return h;
}

QSeries divide_exact(const QSeries& f, const BigInt& k)
{
    QSeries h = f;
    for (auto& x : h.c) {
        if (x % k != 0) throw std::domain_error("inexact q-series division");
        x /= k;
    }
    return h;
}

QSeries inverse(const QSeries& f0)
{
    // strip leading zeros so the valuation is exact
    QSeries f = f0;
    size_t z = 0;
    while (z < f.c.size() && f.c[z] == 0) ++z;
    f.c.erase(f.c.begin(), f.c.begin() + z);
    f.val += static_cast<int>(z);
    if (f.c.empty() || (f.c[0] != 1 && f.c[0] != -1)) throw std::domain_error("leading coefficient is not a unit");
    int len = f.order - f.val + 1;
    QSeries h;
    h.val = -f.val;
    h.order = f.order - 2 * f.val;
    h.c.assign(len, BigInt(0));
    const BigInt& c0 = f.c[0];
    h.c[0] = c0;  // 1/c0 = c0 for c0 = +-1
    for (int n = 1; n < len; ++n) {
        BigInt s = 0;
        for (int i = 1; i <= n; ++i) s += f.c[i] * h.c[n - i];
        h.c[n] = -c0 * s;
    }
    return h;
}

QSeries power(const QSeries& f, int e)
{
    if (e < 0) throw std::invalid_argument("negative power");
    if (e == 0) return QSeries::constant(1, f.order);
    QSeries r = f;
    for (int i = 1; i < e; ++i) r = r * f;
    return r;
}

QSeries eisenstein_qexp(int k, int N)
{
    if (N < 1) throw std::invalid_argument("N >= 1 required");
    int r;
    long scale;
    switch (k) {
    case 2: r = 1; scale = -24; break;
    case 4: r = 3; scale = 240; break;
    case 6: r = 5; scale = -504; break;
    default: throw std::invalid_argument("eisenstein_qexp supports k = 2, 4, 6");
    }
    QSeries f = QSeries::constant(1, N);
    for (int n = 1; n <= N; ++n) {
        BigInt s = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) s += boost::multiprecision::pow(BigInt(d), r);
        f.c[n] = scale * s;
    }
    return f;
}

QSeries delta_qexp(int N)
{
    QSeries e4 = eisenstein_qexp(4, N), e6 = eisenstein_qexp(6, N);
    return divide_exact(e4 * e4 * e4 - e6 * e6, 1728);
}

QSeries j_qexp(int N)
{
    QSeries e4 = eisenstein_qexp(4, N + 2);
    return (e4 * e4 * e4 * inverse(delta_qexp(N + 2))).truncated(N);
}

QSeries d_operator(const QSeries& f)
{
    QSeries h = f;
    for (size_t i = 0; i < h.c.size(); ++i) h.c[i] *= (f.val + static_cast<int>(i));
    return h;
}

QSeries faber_jm(int m, int N)
{
    if (m < 0) throw std::invalid_argument("faber_jm needs m >= 0");
    if (m == 0) return QSeries::constant(1, N);
    QSeries j1 = j_qexp(N + m) - QSeries::constant(744, N + m);
    std::vector<QSeries> pw{QSeries::constant(1, N + m), j1};
    for (int e = 2; e <= m; ++e) pw.push_back(pw.back() * j1);
    QSeries f = pw[m];
    // cancel q^{-m+1} .. q^0 with lower powers of j1
    for (int n = -m + 1; n <= 0; ++n) {
        BigInt e = f.coeff(n);
        if (e != 0) f = f - e * pw[-n];
    }
    return f.truncated(N);
}

QSeries hecke_normalized(const QSeries& f, int m, int N)
{
    if (m < 1) throw std::invalid_argument("hecke operator needs m >= 1");
    QSeries h;
    h.val = m * f.val;
    h.order = N;
    h.c.assign(N - h.val + 1, BigInt(0));
    for (int n = h.val; n <= N; ++n) {
        int g = std::gcd(m, n < 0 ? -n : n);
        BigInt s = 0;
        for (int a = 1; a <= g; ++a) {
            if (g % a != 0) continue;
            s += BigInt(m / a) * f.coeff(m * n / (a * a));
        }
        h.c[n - h.val] = s;
    }
    return h;
}

namespace {

std::mutex g_cache_mu;
int g_default_order = 64;

QSeries build_series(const std::string& name, int N)
{
    if (name == "E2") return eisenstein_qexp(2, N);
    if (name == "E4") return eisenstein_qexp(4, N);
    if (name == "E6") return eisenstein_qexp(6, N);
    if (name == "Delta") return delta_qexp(N);
    if (name == "j") return j_qexp(N);
    if (name == "j1") return faber_jm(1, N);
    if (name == "Dj") return d_operator(j_qexp(N));
    throw std::invalid_argument("unknown series " + name);
}

}  // namespace

int default_qseries_order()
{
    std::lock_guard<std::mutex> lock(g_cache_mu);
    return g_default_order;
}

void set_default_qseries_order(int N)
{
    if (N < 8) throw std::invalid_argument("q-series order must be at least 8");
    std::lock_guard<std::mutex> lock(g_cache_mu);
    g_default_order = N;
}

const QSeries& cached_series(const std::string& name, int N)
{
    static std::map<std::pair<std::string, int>, std::unique_ptr<QSeries>> cache;
    std::lock_guard<std::mutex> lock(g_cache_mu);
    auto& slot = cache[{name, N}];
    if (!slot) slot = std::make_unique<QSeries>(build_series(name, N));
    return *slot;
}

template <class Real>
const NumericQSeries<Real>& cached_numeric(const std::string& name, int N)
{
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, std::unique_ptr<NumericQSeries<Real>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({name, N});
        if (it != cache.end()) return *it->second;
    }
    const QSeries& s = cached_series(name, N);
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{name, N}];
    if (!slot) slot = std::make_unique<NumericQSeries<Real>>(s);
    return *slot;
}

template const NumericQSeries<double>& cached_numeric<double>(const std::string&, int);
template const NumericQSeries<long double>& cached_numeric<long double>(const std::string&, int);

QEval<double> e2_star(std::complex<double> tau, int N, double tol)
{
    QEval<double> e = cached_numeric<double>("E2", N).eval(tau);
    if (e.tail > tol) throw QSeriesTailError(e.tail);
    e.value -= 3.0 / (std::numbers::pi * tau.imag());
    return e;
}

AknResult akn_kernel(std::complex<double> tau, std::complex<double> w, int M, int N)
{
    if (tau.imag() <= 0 || w.imag() <= 0) throw std::domain_error("akn kernel needs points in H");
    std::complex<double> jt = j1_value<double>(tau, N) + 744.0;
    std::complex<double> jw = j1_value<double>(w, N) + 744.0;
    if (std::abs(jw - jt) < 1e-8) throw std::domain_error("kernel pole proximity");
    QEval<double> dj = cached_numeric<double>("Dj", N).eval(tau);
    if (!(dj.tail < 1e-6 * std::max(1.0, std::abs(dj.value))))
        throw QSeriesTailError(dj.tail);
    AknResult r;
    r.direct = dj.value / (jw - jt);
    std::complex<double> q = std::exp(std::complex<double>(0, 2 * std::numbers::pi) * tau);
    std::complex<double> qm = 1, s = 0, first = 0;
    for (int m = 0; m <= M; ++m) {
        std::complex<double> term = jm_value<double>(m, w, N) * qm;
        s += term;
        if (m == 1) first = term;
        r.last_term = std::abs(term);
        qm *= q;
    }
    r.series = s;
    // terms behave like e^{2 pi m (Im w - Im tau)}
    r.series_converged = tau.imag() > w.imag() && r.last_term <= std::max(1e-300, std::abs(first));
    return r;
}

}  // namespace hypeis
