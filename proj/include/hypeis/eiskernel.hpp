#pragma once

#include <complex>
#include <vector>

#include "hypeis/qforms.hpp"
#include "hypeis/quadrature.hpp"

namespace hypeis {

// Truncated lattice sum over |a| <= a_max with an extrapolated a-tail.
struct LatticeSum {
    std::complex<double> partial;  // raw sum at a_max
    std::complex<double> value;    // extrapolated to a_max -> infinity
    double uncertainty = 0;
    i64 a_max = 0;
    bool tail_oversized = false;
};

// sum over Q' ~ Q of sgn(Q')^{k/2} v^s / (Q'(tau,1)^{k/2} |Q'(tau,1)|^s)
LatticeSum direct_eis(int k, const QuadForm& q, std::complex<double> tau, double s, i64 a_max, double tol = 1e-3);
// sum over classes of chi_d(Q) direct_eis(Q)
LatticeSum twisted_eis(int k, const DiscriminantSplit& split, std::complex<double> tau, double s, i64 a_max,
                       double tol = 1e-3);

// (1/2 pi i) int e^{2 pi m t} (t^2 + lambda^2)^{-k/2} dt in closed form; 0 for m <= 0
double laplace_bessel(int k, i64 m, double lambda);

// int over Re t = v of e^{2 pi m t} / ((t^2 + lambda^2)^{k/2} |t^2 + lambda^2|^s) dt
QuadResult contour_cm(int k, i64 m, double lambda, double v, double s, double tol);

// cos^2 taper: 1 on [1, A/2], falling to 0 at A
double taper_weight(i64 a, i64 a_max);

struct FourierCoeff {
    std::complex<double> value;
    double tail = 0;  // |S(A) - S(A/2)|
    i64 a_max = 0;
};
// coefficient of q^m at s = 0 from the Salie-Bessel series, m >= 1
FourierCoeff fourier_coeff_bessel(int k, const DiscriminantSplit& split, i64 m, i64 a_max);

// non-holomorphic constant term of the weight-2 series
double constant_term_k2(const DiscriminantSplit& split, double v, double tol = 1e-12);

struct FourierTable {
    int k = 0;
    DiscriminantSplit split;
    std::vector<std::complex<double>> coeffs;  // m = 0..M, holomorphic part
    std::vector<double> trunc_err;
    i64 a_max = 0;
    double const_times_v = 0;  // k = 2: constant term is const_times_v / v
};
FourierTable fourier_table(int k, const DiscriminantSplit& split, int m_max, i64 a_max);

struct FourierValue {
    std::complex<double> value;
    double tail = 0;
};
FourierValue fourier_eval(const FourierTable& t, std::complex<double> tau);
FourierValue fourier_eval(int k, const DiscriminantSplit& split, std::complex<double> tau, double s, int m_max,
                          i64 a_max);

}  // namespace hypeis
