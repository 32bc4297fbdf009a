#include "hypeis/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hypeis {

namespace {

std::string trim(const std::string& s)
{
    size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& val)
{
    T out{};
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), out);
    if (ec != std::errc() || p != val.data() + val.size())
        throw std::invalid_argument("config: bad value for " + key + ": '" + val + "'");
    return out;
}

}  // namespace

Config parse_config(const std::string& text, Config c)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key == "N_qseries")
            c.N_qseries = parse_number<int>(key, val);
        else if (key == "a_max")
            c.a_max = parse_number<i64>(key, val);
        else if (key == "c_max")
            c.c_max = parse_number<int>(key, val);
        else if (key == "m_max")
            c.m_max = parse_number<int>(key, val);
        else if (key == "quad_tol")
            c.quad_tol = parse_number<double>(key, val);
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (c.N_qseries < 8 || c.a_max < 8 || c.c_max < 0 || c.m_max < 1 || !(c.quad_tol > 0))
        throw std::invalid_argument("config: value out of range");
    return c;
}

Config load_config_file(const std::string& path, Config base)
{
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), base);
}

Config config_from_env()
{
    const char* p = std::getenv("HYPEIS_CONFIG");
    if (!p || !*p) return {};
    return load_config_file(p);
}

}  // namespace hypeis
