#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "doctest.h"
#include "hypeis/cli.hpp"

using namespace hypeis;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

// Same keys, types and integers; decimal strings equal to 1e-9 relative (absolute below 1e-12).
void compare(const json& got, const json& want, const std::string& path)
{
    CAPTURE(path);
    REQUIRE(got.type() == want.type());
    if (want.is_object()) {
        REQUIRE(got.size() == want.size());
        for (auto it = want.begin(); it != want.end(); ++it) {
            REQUIRE(got.contains(it.key()));
            if (it.key() == "wall_time_ms") continue;
            compare(got[it.key()], it.value(), path + "." + it.key());
        }
    } else if (want.is_array()) {
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < want.size(); ++i) compare(got[i], want[i], path + "[" + std::to_string(i) + "]");
    } else if (want.is_string()) {
        const std::string& a = got.get_ref<const std::string&>();
        const std::string& b = want.get_ref<const std::string&>();
        char* end_a = nullptr;
        char* end_b = nullptr;
        double x = std::strtod(a.c_str(), &end_a), y = std::strtod(b.c_str(), &end_b);
        if (*end_a == 0 && *end_b == 0 && !a.empty() && !b.empty())
            CHECK(std::abs(x - y) <= std::max(1e-12, 1e-9 * std::abs(y)));
        else
            CHECK(a == b);
    } else {
        CHECK(got == want);
    }
}

void golden(const std::string& name, const std::vector<std::string>& args)
{
    unsetenv("HYPEIS_CONFIG");
    Run r = run(args);
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    std::string path = std::string(GOLDEN_DIR) + "/" + name + ".json";
    if (std::getenv("HYPEIS_UPDATE_GOLDEN")) std::ofstream(path) << r.out;
    std::ifstream f(path);
    REQUIRE(f.good());
    json want = json::parse(f), got = json::parse(r.out);
    CHECK(got["schema"] == kSchemaVersion);
    compare(got, want, name);
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("golden JSON")
    {
        golden("classes_12", {"classes", "12", "--json"});
        golden("salie_5_5", {"salie", "--D", "5", "--d", "5", "--m", "1", "--amax", "6", "--json"});
        golden("weyl_12", {"weyl", "--D", "12", "--m", "1", "--amax", "4", "--json"});
        golden("trace_5_5", {"trace", "--D", "5", "--d", "5", "--mmax", "3", "--json"});
        golden("fourier_k12", {"fourier", "--k", "12", "--D", "5", "--d", "5", "--mmax", "3", "--amax", "200", "--json"});
        golden("verify_akn", {"verify", "akn", "--json"});
        golden("verify_laplace", {"verify", "laplace", "--k", "4", "--m", "2", "--lambda", "1.0", "--json"});
        golden("verify_salie_weyl", {"verify", "salie-weyl", "--D", "12", "--json"});
    }

    TEST_CASE("exit codes")
    {
        unsetenv("HYPEIS_CONFIG");
        CHECK(run({"classes", "5"}).code == 0);
        CHECK(run({"classes", "7"}).code == 1);
        CHECK(run({"nonsense"}).code == 1);
        CHECK(run({"verify", "thm-main", "--tau", "3x"}).code == 1);
        CHECK(run({"salie", "--D", "5", "--d", "5", "--json", "--csv"}).code == 1);
        // a check that cannot pass at a tiny budget reports failure, not a usage error
        Run r = run({"verify", "bridge", "--D", "5", "--d", "5", "--m", "1", "--rho", "6", "--amax", "8", "--cmax", "2"});
        CHECK(r.code == 2);
        CHECK(r.out.find("FAIL") != std::string::npos);
    }

    TEST_CASE("missing d defaults with a warning")
    {
        Run r = run({"salie", "--D", "12", "--m", "1", "--amax", "2"});
        CHECK(r.code == 0);
        CHECK(r.err.find("12") != std::string::npos);
    }

    TEST_CASE("CSV output")
    {
        Run r = run({"salie", "--D", "5", "--d", "5", "--m", "1", "--amax", "3", "--csv"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("a,c,T,weyl_side\n", 0) == 0);
        CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
    }

    TEST_CASE("config file through the environment")
    {
        std::string path = "/tmp/hypeis_cli_test.cfg";
        std::ofstream(path) << "a_max=300\n";
        setenv("HYPEIS_CONFIG", path.c_str(), 1);
        Run r = run({"fourier", "--k", "12", "--D", "5", "--d", "5", "--mmax", "1", "--json"});
        unsetenv("HYPEIS_CONFIG");
        CHECK(json::parse(r.out)["a_max"] == 300);
        std::ofstream(path) << "bogus=1\n";
        setenv("HYPEIS_CONFIG", path.c_str(), 1);
        CHECK(run({"classes", "5"}).code == 1);
        unsetenv("HYPEIS_CONFIG");
        std::remove(path.c_str());
    }

    TEST_CASE("number formatting and tau parsing")
    {
        CHECK(format_number(0.1) == "0.10000000000000001");
        CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
        CHECK(parse_tau("3i") == std::complex<double>(0, 3));
        CHECK(parse_tau("0.2+1i") == std::complex<double>(0.2, 1));
        CHECK(parse_tau("-0.5+2.5i") == std::complex<double>(-0.5, 2.5));
        CHECK(parse_tau("i") == std::complex<double>(0, 1));
        CHECK(parse_tau("1-2i") == std::complex<double>(1, -2));
        CHECK_THROWS(parse_tau("two"));
        CHECK_THROWS(parse_tau("1+2j"));
    }
}
