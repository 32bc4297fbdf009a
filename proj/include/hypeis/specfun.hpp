#pragma once

#include <cstdint>

namespace hypeis {

// J_{n+1/2}(x), I_{n+1/2}(x) for x > 0
double bessel_j_half(int n, double x);
double bessel_i_half(int n, double x);

// power-series definitions, any real order nu > -1
double bessel_j_series(double nu, double x);
double bessel_i_series(double nu, double x);

// y^s for m = 0, else 2 pi sqrt(|m| y) I_{s-1/2}(2 pi |m| y)
double phi(std::int64_t m, double y, int s);

std::int64_t divisor_sigma(int r, std::int64_t m);

}  // namespace hypeis
