#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hypeis/genus.hpp"
#include "hypeis/qforms.hpp"
#include "hypeis/quadrature.hpp"

namespace hypeis {

template <class Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <class Real>
struct CycleResult {
    CVec<Real> value;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> error;  // last panel-doubling difference
    Eigen::Matrix<Real, Eigen::Dynamic, 1> l1;
    int nodes = 0;
};

struct QuadratureFailure : std::runtime_error {
    double achieved;
    QuadratureFailure(const std::string& what, double a) : std::runtime_error(what), achieved(a) {}
};

// sigma_Q(i e^l) = (w i e^l + w')/(i e^l + 1), in working precision Real
template <class Real>
struct GeodesicParam {
    Real w, wprime, length;

    explicit GeodesicParam(const QuadForm& q)
    {
        using std::log;
        using std::sqrt;
        Geodesic g = geodesic(q);
        Real sD = sqrt(static_cast<Real>(discriminant(q)));
        Real r1 = (Real(-q.b) + sD) / (2 * Real(q.a)), r2 = (Real(-q.b) - sD) / (2 * Real(q.a));
        w = r1 > r2 ? r1 : r2;
        wprime = r1 > r2 ? r2 : r1;
        i64 g0 = content(q) < 0 ? -content(q) : content(q);
        Real sD0 = sqrt(static_cast<Real>(discriminant(q) / (g0 * g0)));
        Real eps = (Real(g.pell_t) + Real(g.pell_u) * sD0) / 2;
        length = 2 * log(eps);
    }

    std::complex<Real> point(Real l) const
    {
        std::complex<Real> z(0, std::exp(l));
        return (w * z + wprime) / (z + Real(1));
    }
};

// Vector-valued cycle integral over [l0, l0 + 2 log eps]; f maps a point of H to a CVec of fixed size.
template <class Real, class F>
CycleResult<Real> cycle_integral_vec(const QuadForm& q, F&& f, Real tol, Real l0 = 0, int nodes_per_panel = 32,
                                     int max_panels = 64)
{
    GeodesicParam<Real> gp(q);
    const auto& rule = legendre_rule<Real>(nodes_per_panel);
    CVec<Real> prev;
    for (int panels = 1; panels <= max_panels; panels *= 2) {
        Real h = gp.length / panels;
        CVec<Real> sum;
        Eigen::Matrix<Real, Eigen::Dynamic, 1> l1;
        for (int p = 0; p < panels; ++p) {
            Real c = l0 + (p + Real(0.5)) * h;
            for (int k = 0; k < nodes_per_panel; ++k) {
                CVec<Real> v = f(gp.point(c + Real(0.5) * h * rule.x[k]));
                Real wk = Real(0.5) * h * rule.w[k];
                if (sum.size() == 0) {
                    sum = CVec<Real>::Zero(v.size());
                    l1 = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(v.size());
                }
                sum += wk * v;
                l1 += wk * v.cwiseAbs();
            }
        }
        if (prev.size() == sum.size()) {
            Eigen::Matrix<Real, Eigen::Dynamic, 1> diff = (sum - prev).cwiseAbs();
            bool ok = true;
            for (int i = 0; i < diff.size(); ++i) ok = ok && diff(i) <= tol * std::max(Real(1), l1(i));
            if (ok) return {sum, diff, l1, panels * nodes_per_panel};
            if (2 * panels > max_panels)
                throw QuadratureFailure("cycle integral did not converge", static_cast<double>(diff.maxCoeff()));
        }
        prev = sum;
    }
    throw QuadratureFailure("cycle integral did not converge", -1);
}

template <class Real, class F>
std::complex<Real> cycle_integral(const QuadForm& q, F&& f, Real tol, Real l0 = 0)
{
    auto g = [&](std::complex<Real> z) {
        CVec<Real> v(1);
        v(0) = f(z);
        return v;
    };
    return cycle_integral_vec<Real>(q, g, tol, l0).value(0);
}

// sum over classes of chi_d(Q) times the cycle integral
template <class Real, class F>
CycleResult<Real> trace_cycle_vec(const DiscriminantSplit& split, F&& f, Real tol)
{
    CycleResult<Real> total;
    for (const auto& q : class_reps(split.D)) {
        int chi = genus_character(split, q);
        if (chi == 0) continue;
        auto r = cycle_integral_vec<Real>(q, f, tol);
        if (total.value.size() == 0) {
            total = r;
            total.value *= Real(chi);
        } else {
            total.value += Real(chi) * r.value;
            total.error += r.error;
            total.l1 += r.l1;
            total.nodes += r.nodes;
        }
    }
    return total;
}

template <class Real, class F>
std::complex<Real> trace_cycle(const DiscriminantSplit& split, F&& f, Real tol)
{
    auto g = [&](std::complex<Real> z) {
        CVec<Real> v(1);
        v(0) = f(z);
        return v;
    };
    auto r = trace_cycle_vec<Real>(split, g, tol);
    return r.value.size() ? r.value(0) : std::complex<Real>(0);
}

double trace_one(const DiscriminantSplit& split, double tol = 1e-12);

struct NieburValue {
    std::complex<double> value;
    double tail = 0;
};

NieburValue niebur_G(i64 m, std::complex<double> tau, int s, int c_max);
// several m sharing one coset enumeration
std::vector<NieburValue> niebur_G_multi(const std::vector<i64>& ms, std::complex<double> tau, int s, int c_max);

struct BridgeCheck {
    double lhs = 0, rhs = 0;
    double lhs_err = 0, rhs_err = 0;
};

BridgeCheck dit_bridge_check(const DiscriminantSplit& split, i64 m, int rho, double tol, int c_max, i64 a_max);

// tr(j_m), m = 0..m_max, with per-trace quadrature error
struct FaberTraces {
    std::vector<std::complex<double>> trace;
    std::vector<double> error;
    double tr_one = 0;
};
FaberTraces faber_traces(const DiscriminantSplit& split, int m_max, double tol);

struct MainRhs {
    std::complex<double> value;           // assembled from the display with E2*
    std::complex<double> value_by_coeffs; // q^0 term plus sum of c_m q^m
    std::complex<double> q0_coeff;        // includes -tr(1) * (-3/(pi v))
    std::vector<std::complex<double>> coeffs;  // m = 0..m_max; coeffs[0] is the holomorphic constant
    double error = 0;
};
MainRhs rhs_theorem_main(const DiscriminantSplit& split, std::complex<double> tau, int m_max, double tol);

struct VarRhs {
    std::complex<double> value;
    std::vector<std::complex<double>> coeffs;  // m = 0..m_max, coeffs[0] = 0
    std::vector<double> coeff_err;
    double error = 0;
};
VarRhs rhs_theorem_var(int k, const DiscriminantSplit& split, std::complex<double> tau, int m_max, double tol,
                       int c_max);

}  // namespace hypeis
