#pragma once

#include <cmath>
#include <complex>

namespace hypeis {

// Neumaier compensated summation.
template <class T>
class CompensatedSum {
public:
    void add(T x)
    {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(T x)
    {
        add(x);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <class R>
class CompensatedSum<std::complex<R>> {
public:
    void add(std::complex<R> x)
    {
        re_.add(x.real());
        im_.add(x.imag());
    }
    CompensatedSum& operator+=(std::complex<R> x)
    {
        add(x);
        return *this;
    }
    std::complex<R> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<R> re_, im_;
};

}  // namespace hypeis
