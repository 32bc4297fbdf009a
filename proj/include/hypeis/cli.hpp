#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hypeis {

inline constexpr const char* kSchemaVersion = "hypeis.v1";

struct VerificationReport {
    std::string name;
    std::complex<double> lhs, rhs;
    double abs_err = 0, rel_err = 0;
    double tolerance = 0;  // absolute; pass = abs_err < tolerance
    std::map<std::string, double> budgets;
    bool pass = false;
    long wall_time_ms = 0;
};

// 17 significant digits
std::string format_number(double x);
std::complex<double> parse_tau(const std::string& s);

// exit codes: 0 all checks pass, 2 check failure, 1 usage or input error
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypeis
