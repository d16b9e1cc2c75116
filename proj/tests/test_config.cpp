#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kppwaves/config.hpp"
#include "kppwaves/errors.hpp"

using namespace kppwaves;

namespace {

const char* kPowerConfig =
    "# exact solvable case\n"
    "[diffusion]\n"
    "kind = power\n"
    "[reaction]\n"
    "kind = power\n"
    "[exponents]\n"
    "gamma0 = 1\n"
    "delta0 = 1\n"
    "gamma1 = 1\n"
    "delta1 = 0\n"
    "[coefficients]\n"
    "g0 = 1\n"
    "g1 = 1\n"
    "d0 = 1\n"
    "d1 = 1\n";

}  // namespace

TEST_CASE("sections and key-value pairs") {
    ConfigFile cfg = parse_config(kPowerConfig, "inline");
    CHECK(cfg.sections.at("diffusion").at("kind") == "power");
    CHECK(cfg.sections.at("exponents").at("gamma0") == "1");
    CHECK(cfg.source_path == "inline");
}

TEST_CASE("comments and blank lines are skipped") {
    ConfigFile cfg = parse_config("; leading comment\n\n[a]\nx = 1  # trailing\n\n");
    CHECK(cfg.sections.at("a").at("x") == "1");
}

TEST_CASE("parse errors report line and column") {
    try {
        parse_config("[diffusion]\nkind power\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_config("[unterminated\n"), ParseError);
    CHECK_THROWS_AS(parse_config("key = 1\n"), ParseError);  // key outside any section
}

TEST_CASE("power-family problem from config") {
    ProblemSpec spec = problem_from_config(parse_config(kPowerConfig));
    CHECK(spec.gamma0 == 1.0);
    CHECK(spec.delta0 == 1.0);
    CHECK(spec.d(0.5) == doctest::Approx(0.5));            // d = r
    CHECK(spec.g(0.5) == doctest::Approx(0.25));           // g = r(1-r)
    CHECK(spec.d(0.25) * spec.g(0.25) == doctest::Approx(0.25 * 0.25 * 0.75));
}

TEST_CASE("expression kind requires and uses expr") {
    std::string text =
        "[diffusion]\nkind = expr\nexpr = 1\n"
        "[reaction]\nkind = expr\nexpr = r*(1-r)\n"
        "[exponents]\ngamma0 = 1\ndelta0 = 0\ngamma1 = 1\ndelta1 = 0\n"
        "[coefficients]\ng0 = 1\ng1 = 1\nd0 = 1\nd1 = 1\n";
    ProblemSpec spec = problem_from_config(parse_config(text));
    CHECK(spec.d(0.3) == doctest::Approx(1.0));
    CHECK(spec.g(0.3) == doctest::Approx(0.21));

    std::string missing =
        "[diffusion]\nkind = expr\n"
        "[reaction]\nkind = power\n"
        "[exponents]\ngamma0 = 1\ndelta0 = 0\ngamma1 = 1\ndelta1 = 0\n";
    CHECK_THROWS(problem_from_config(parse_config(missing)));
}

TEST_CASE("load_problem reads from disk") {
    std::string path = "test_config_tmp.cfg";
    {
        std::ofstream os(path);
        os << kPowerConfig;
    }
    ProblemSpec spec = load_problem(path);
    CHECK(spec.d(0.5) == doctest::Approx(0.5));
    std::remove(path.c_str());
}
