#include "hypeis/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace hypeis {

namespace {

template <class Real>
const GaussRule<Real>& cached_rule(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule<Real>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule<Real>>(gauss_legendre<Real>(n));
    return *slot;
}

}  // namespace

const GaussRule<double>& legendre_rule_double(int n) { return cached_rule<double>(n); }
const GaussRule<long double>& legendre_rule_long(int n) { return cached_rule<long double>(n); }

}  // namespace hypeis
