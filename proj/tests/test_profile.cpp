#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>

#include "kppwaves/errors.hpp"
#include "kppwaves/phase.hpp"
#include "kppwaves/problem.hpp"
#include "kppwaves/profile.hpp"

using namespace kppwaves;

namespace {

const ProblemSpec kExactSpec = ProblemSpec::power_law(1, 1, 1, 0);   // d=r, g=r(1-r)
const ProblemSpec kClassical = ProblemSpec::power_law(1, 0, 1, 0);   // d=1, g=r(1-r)
const double kCExact = 1.0 / std::sqrt(2.0);

WaveProfile exact_profile() {
    static WaveProfile wp = [] {
        auto f = composite(kExactSpec);
        return reconstruct_profile(kExactSpec, solve_phase(f, kCExact));
    }();
    return wp;
}

}  // namespace

TEST_CASE("closed-form profile") {
    WaveProfile wp = exact_profile();
    // U(z) = 1 - exp(z/sqrt(2))/2 up to z1 = sqrt(2) ln 2.
    double sup = 0.0;
    for (std::size_t i = 0; i < wp.z.size(); ++i) {
        double ue = 1.0 - 0.5 * std::exp(wp.z[i] / std::sqrt(2.0));
        sup = std::max(sup, std::fabs(wp.U[i] - std::max(ue, 0.0)));
    }
    CHECK(sup < 1e-4);
    CHECK(wp.z1 == doctest::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(1e-3));
    CHECK(wp.z1_finite);
    CHECK_FALSE(wp.z0_finite);
    CHECK(wp.z0 == -std::numeric_limits<double>::infinity());
}

TEST_CASE("normalization anchors the half level at z = 0") {
    WaveProfile wp = exact_profile();
    // Interpolate U at z = 0.
    for (std::size_t i = 0; i + 1 < wp.z.size(); ++i) {
        if (wp.z[i] <= 0.0 && wp.z[i + 1] >= 0.0) {
            double t = (0.0 - wp.z[i]) / (wp.z[i + 1] - wp.z[i]);
            double u0 = wp.U[i] + t * (wp.U[i + 1] - wp.U[i]);
            CHECK(u0 == doctest::Approx(0.5).epsilon(1e-6));
            return;
        }
    }
    FAIL("z = 0 not bracketed");
}

TEST_CASE("classical front approaches both equilibria asymptotically") {
    auto f = composite(kClassical);
    SpeedResult sr = critical_speed(f);
    WaveProfile wp = reconstruct_profile(kClassical, solve_phase(f, sr.c_star));
    CHECK_FALSE(wp.z0_finite);
    CHECK_FALSE(wp.z1_finite);
    CHECK(wp.z0 == -std::numeric_limits<double>::infinity());
    CHECK(wp.z1 == std::numeric_limits<double>::infinity());
}

TEST_CASE("profile bounds and monotonicity") {
    WaveProfile wp = exact_profile();
    for (std::size_t i = 0; i < wp.U.size(); ++i) {
        CHECK(wp.U[i] >= 0.0);
        CHECK(wp.U[i] <= 1.0);
        if (i > 0) CHECK(wp.U[i] < wp.U[i - 1] + 1e-10);
    }
}

TEST_CASE("residual identities") {
    WaveProfile wp = exact_profile();
    ProfileResiduals res = residual_integral_form(kExactSpec, wp);
    CHECK(res.res_speed < 1e-6);
    CHECK(res.res_def < 1e-5);

    auto f = composite(kClassical);
    SpeedResult sr = critical_speed(f);
    WaveProfile cp = reconstruct_profile(kClassical, solve_phase(f, sr.c_star));
    ProfileResiduals cres = residual_integral_form(kClassical, cp);
    CHECK(cres.res_speed < 1e-4);
    CHECK(cres.res_def < 1e-3);
}

TEST_CASE("endpoint flux vanishes") {
    WaveProfile wp = exact_profile();
    const std::size_t n = wp.z.size(), edge = n / 100;
    auto flux = [&](std::size_t i) {
        double du = (wp.U[i + 1] - wp.U[i - 1]) / (wp.z[i + 1] - wp.z[i - 1]);
        return kExactSpec.d(wp.U[i]) * std::fabs(du);
    };
    for (std::size_t i = 1; i < edge; ++i) CHECK(flux(i) < 1e-3);
    for (std::size_t i = n - edge; i + 1 < n; ++i) CHECK(flux(i) < 1e-3);
}

TEST_CASE("translation invariance") {
    WaveProfile wp = exact_profile();
    WaveProfile shifted = shifted_and_renormalized(wp, 3.75);
    REQUIRE(shifted.U.size() == wp.U.size());
    for (std::size_t i = 0; i < wp.U.size(); ++i) {
        CHECK(std::fabs(shifted.U[i] - wp.U[i]) <= 1e-12);
        CHECK(std::fabs(shifted.z[i] - wp.z[i]) <= 1e-9);
    }
}

TEST_CASE("csv round trip is bit-exact") {
    WaveProfile wp = exact_profile();
    const std::string path = "test_profile_tmp.csv";
    write_profile_csv(path, wp);
    WaveProfile back = read_profile_csv(path);
    REQUIRE(back.z.size() == wp.z.size());
    for (std::size_t i = 0; i < wp.z.size(); ++i) {
        CHECK(back.z[i] == wp.z[i]);
        CHECK(back.U[i] == wp.U[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("profiles require a solution that reaches zero") {
    auto f = composite(kExactSpec);
    PhaseSolution sub = solve_phase(f, 0.5);
    CHECK_THROWS_AS(reconstruct_profile(kExactSpec, sub), NotASolution);
}

TEST_CASE("finite left endpoint for a sharp wave") {
    // (gamma1, delta1) = (1/2, 1) predicts a finite z0.
    ProblemSpec spec = ProblemSpec::power_law(1, 1, 0.5, 1);
    auto f = composite(spec);
    SpeedResult sr = critical_speed(f);
    WaveProfile wp = reconstruct_profile(spec, solve_phase(f, sr.c_hi));
    CHECK(wp.z0_finite);
    CHECK(std::isfinite(wp.z0));
    CHECK(wp.z0 < wp.z.front());
}
