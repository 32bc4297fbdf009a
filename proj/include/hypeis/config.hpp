#pragma once

#include <string>

#include "hypeis/qforms.hpp"

namespace hypeis {

struct Config {
    int N_qseries = 64;
    i64 a_max = 5000;
    int c_max = 400;
    int m_max = 10;
    double quad_tol = 1e-9;
};

// key=value lines; '#' starts a comment; unknown keys are errors
Config parse_config(const std::string& text, Config base = {});
Config load_config_file(const std::string& path, Config base = {});
// defaults, overridden by the file named in HYPEIS_CONFIG when set
Config config_from_env();

}  // namespace hypeis
