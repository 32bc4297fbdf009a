#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

namespace hypeis {

using i64 = std::int64_t;

struct Matrix2Z {
    i64 a = 1, b = 0, c = 0, d = 1;
    friend bool operator==(const Matrix2Z&, const Matrix2Z&) = default;
};

Matrix2Z operator*(const Matrix2Z& x, const Matrix2Z& y);
i64 det(const Matrix2Z& g);
Matrix2Z inverse(const Matrix2Z& g);

inline constexpr Matrix2Z kIdentity{1, 0, 0, 1};
inline constexpr Matrix2Z kS{0, -1, 1, 0};
inline constexpr Matrix2Z kT{1, 1, 0, 1};

template <class Real>
std::complex<Real> mobius(const Matrix2Z& g, std::complex<Real> z)
{
    return (Real(g.a) * z + Real(g.b)) / (Real(g.c) * z + Real(g.d));
}

// automorphy factor j(g, z) = cz + d
template <class Real>
std::complex<Real> j_factor(const Matrix2Z& g, std::complex<Real> z)
{
    return Real(g.c) * z + Real(g.d);
}

// ax^2 + bxy + cy^2
struct QuadForm {
    i64 a = 0, b = 0, c = 0;
    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

i64 discriminant(const QuadForm& q);
int sgn_form(const QuadForm& q);
i64 content(const QuadForm& q);
QuadForm act(const QuadForm& q, const Matrix2Z& g);
QuadForm form_of_matrix(const Matrix2Z& g);

// Q(z, 1)
template <class Real>
std::complex<Real> eval_form(const QuadForm& q, std::complex<Real> z)
{
    return (Real(q.a) * z + Real(q.b)) * z + Real(q.c);
}

i64 isqrt(i64 n);
bool is_square(i64 n);
bool is_discriminant(i64 D);
bool is_fundamental(i64 d);

// D > 0, non-square, D = 0,1 mod 4
void require_positive_discriminant(i64 D);

bool is_reduced(const QuadForm& q);
// right neighbour; step (if given) receives the matrix with q o step = result
QuadForm rho_step(const QuadForm& q, Matrix2Z* step = nullptr);
QuadForm reduce(const QuadForm& q);
std::vector<QuadForm> reduction_cycle(const QuadForm& q);
std::vector<QuadForm> reduced_forms(i64 D);  // all contents
std::vector<QuadForm> class_reps(i64 D);
bool equivalent(const QuadForm& q1, const QuadForm& q2);

// Maps every reduced form of discriminant D to the index of its class in class_reps(D).
class ClassIndex {
public:
    explicit ClassIndex(i64 D);
    i64 D() const { return D_; }
    const std::vector<QuadForm>& reps() const { return reps_; }
    int class_of(const QuadForm& q) const;

private:
    i64 D_;
    std::vector<QuadForm> reps_;
    std::map<QuadForm, int> index_;
};

struct PellSolution {
    i64 t = 0, u = 0;
};
PellSolution pell(i64 D);
PellSolution pell_bruteforce(i64 D, i64 u_max);

Matrix2Z automorph(const QuadForm& q);

struct Geodesic {
    QuadForm form;
    double w = 0, wprime = 0;
    i64 pell_t = 0, pell_u = 0;
    double epsilon = 0;
    double length() const;
};
Geodesic geodesic(const QuadForm& q);

// one form per translation orbit: 1 <= |a| <= a_max, 0 <= b < 2|a|
std::vector<QuadForm> enumerate_forms(i64 D, i64 a_max);

struct DiscriminantSplit {
    i64 D = 0, d = 1, dprime = 0;
};
DiscriminantSplit make_split(i64 D, i64 d);

// Reduce z into the standard fundamental domain; g (if given) receives the matrix with g z = result.
template <class Real>
std::complex<Real> reduce_to_fundamental(std::complex<Real> z, Matrix2Z* g = nullptr)
{
    Matrix2Z acc = kIdentity;
    for (int iter = 0; iter < 10000; ++iter) {
        Real n = std::floor(z.real() + Real(0.5));
        if (n != 0) {
            z -= n;
            acc = Matrix2Z{1, -static_cast<i64>(n), 0, 1} * acc;
        }
        if (std::norm(z) < Real(1) - Real(8) * std::numeric_limits<Real>::epsilon()) {
            z = Real(-1) / z;
            acc = kS * acc;
        } else {
            break;
        }
    }
    if (g) *g = acc;
    return z;
}

}  // namespace hypeis
