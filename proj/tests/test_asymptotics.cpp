#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kppwaves/asymptotics.hpp"
#include "kppwaves/errors.hpp"
#include "kppwaves/phase.hpp"
#include "kppwaves/problem.hpp"

using namespace kppwaves;

TEST_CASE("classification near the origin") {
    CHECK(classify_near_0(0.5, 0.0) == std::pair{Region0::M01, Existence::NoWave});
    CHECK(classify_near_0(1.0, 1.0) == std::pair{Region0::M02, Existence::Exists});
    // The boundary gamma0 + delta0 = 1 counts as existence.
    CHECK(classify_near_0(1.0, 0.0) == std::pair{Region0::M02, Existence::Exists});
    CHECK_THROWS_AS(classify_near_0(-0.5, 0.0), OutOfDomain);
    CHECK_THROWS_AS(classify_near_0(0.5, -2.0), OutOfDomain);
}

TEST_CASE("classification near r = 1") {
    auto a = classify_near_1(1.0, 0.0);
    CHECK(a.region == Region1::M12);
    CHECK_FALSE(a.z0_finite);
    CHECK(a.predicted_theta == doctest::Approx(2.0));

    auto b = classify_near_1(0.5, 1.0);
    CHECK(b.region == Region1::M13);
    CHECK(b.z0_finite);
    CHECK(b.predicted_theta == doctest::Approx(3.0));

    auto c = classify_near_1(0.5, 0.0);
    CHECK(c.region == Region1::M11);
    CHECK(c.z0_finite);
    CHECK(c.predicted_theta == doctest::Approx(1.5));

    auto d = classify_near_1(2.0, 0.0);
    CHECK(d.region == Region1::M14);
    CHECK_FALSE(d.z0_finite);
    CHECK(d.predicted_theta == doctest::Approx(4.0));

    CHECK_THROWS_AS(classify_near_1(0.0, 0.5), OutOfDomain);
}

TEST_CASE("the four regions partition the admissible quadrant") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> ugamma(1e-6, 4.0), udelta(-1.0 + 1e-6, 4.0);
    int counts[4] = {0, 0, 0, 0};
    for (int k = 0; k < 10'000; ++k) {
        double g1 = ugamma(rng), d1 = udelta(rng);
        if (g1 + d1 <= 0.0) continue;
        auto res = classify_near_1(g1, d1);
        // Exactly one region: enum is single-valued; cross-check both the
        // theta rule and the finiteness rule against the set definitions.
        double sigma1 = g1 + d1;
        if (sigma1 <= 1.0) {
            CHECK(res.predicted_theta == doctest::Approx(sigma1 + 1.0));
            CHECK(res.region == (g1 < 1.0 + d1 ? Region1::M11 : Region1::M12));
        } else {
            CHECK(res.predicted_theta == doctest::Approx(2.0 * sigma1));
            CHECK(res.region == (g1 < 1.0 ? Region1::M13 : Region1::M14));
        }
        CHECK(res.z0_finite == (res.region == Region1::M11 || res.region == Region1::M13));
        counts[static_cast<int>(res.region)]++;
    }
    for (int c : counts) CHECK(c > 0);
}

TEST_CASE("borderline parameters are flagged") {
    CHECK(classify_near_1(1.0, 0.0).borderline);
    CHECK(classify_near_1(0.5 + 1e-13, 0.5).borderline);
    CHECK_FALSE(classify_near_1(0.5, 0.25).borderline);
}

TEST_CASE("full report withholds the z0 prediction when no wave exists") {
    ClassificationReport ok = classify(ProblemSpec::power_law(1, 1, 1, 0));
    CHECK(ok.existence == Existence::Exists);
    CHECK(ok.region0 == Region0::M02);
    CHECK(ok.region1 == Region1::M12);
    REQUIRE(ok.z0_finite.has_value());
    CHECK_FALSE(*ok.z0_finite);

    ClassificationReport no = classify(ProblemSpec::power_law(0.5, 0, 1, 0));
    CHECK(no.existence == Existence::NoWave);
    CHECK_FALSE(no.z0_finite.has_value());
}

TEST_CASE("exponent fit on a synthetic exact power law") {
    PhaseSolution ps;
    ps.c = 1.0;
    ps.r_min = 1e-6;
    ps.eps_seed = 1e-6;
    for (double r = 0.905; r < 0.99999; r += 1e-4) {
        ps.grid.push_back(r);
        ps.y.push_back(std::pow(1.0 - r, 3.0));
    }
    ExponentFit fit = estimate_exponent(ps, 0.91, 0.9999);
    CHECK(fit.theta_hat == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.kappa_hat == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exponent fit on the closed-form solution") {
    auto f = composite(ProblemSpec::power_law(1, 1, 1, 0));
    PhaseSolution ps = solve_phase(f, 1.0 / std::sqrt(2.0));
    ExponentFit fit = estimate_exponent(ps, 1.0 - 1e-2, 1.0 - 1e-5);
    CHECK(fit.theta_hat == doctest::Approx(2.0).epsilon(0.01));
    CHECK(fit.kappa_hat == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("narrow windows are rejected") {
    auto f = composite(ProblemSpec::power_law(1, 1, 1, 0));
    PhaseSolution ps = solve_phase(f, 1.0 / std::sqrt(2.0));
    CHECK_THROWS_AS(estimate_exponent(ps, 0.99, 0.990001), InsufficientSamples);
}
