#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "hypeis/config.hpp"

using namespace hypeis;

TEST_SUITE("config")
{
    TEST_CASE("defaults and overrides")
    {
        Config d;
        CHECK(d.N_qseries == 64);
        CHECK(d.c_max == 400);
        CHECK(d.m_max == 10);
        Config c = parse_config("# budgets\na_max = 800\n\nquad_tol=1e-7  # looser\nm_max=6\n");
        CHECK(c.a_max == 800);
        CHECK(c.quad_tol == 1e-7);
        CHECK(c.m_max == 6);
        CHECK(c.c_max == 400);
    }

    TEST_CASE("bad input is rejected")
    {
        CHECK_THROWS(parse_config("amax=3"));
        CHECK_THROWS(parse_config("a_max=12x"));
        CHECK_THROWS(parse_config("a_max"));
        CHECK_THROWS(parse_config("quad_tol=-1"));
        CHECK_THROWS(parse_config("N_qseries=4"));
        CHECK_THROWS(load_config_file("/nonexistent/hypeis.cfg"));
    }

    TEST_CASE("environment variable names the file")
    {
        std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/hypeis_test.cfg";
        std::ofstream(path) << "c_max=50\n";
        setenv("HYPEIS_CONFIG", path.c_str(), 1);
        CHECK(config_from_env().c_max == 50);
        unsetenv("HYPEIS_CONFIG");
        CHECK(config_from_env().c_max == 400);
        std::remove(path.c_str());
    }
}
