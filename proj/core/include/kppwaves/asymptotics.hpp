#pragma once

#include <optional>

#include "kppwaves/phase.hpp"
#include "kppwaves/problem.hpp"

namespace kppwaves {

enum class Region0 { M01, M02 };
enum class Region1 { M11, M12, M13, M14 };
enum class Existence { Exists, NoWave };

const char* to_string(Region0 r);
const char* to_string(Region1 r);
const char* to_string(Existence e);

/// Near r = 0: (gamma0, delta0) with 0 < gamma0+delta0 < 1 excludes a
/// travelling wave; gamma0+delta0 >= 1 guarantees one.
std::pair<Region0, Existence> classify_near_0(double gamma0, double delta0);

struct Near1Classification {
    Region1 region;
    bool z0_finite;
    double predicted_theta;  // decay exponent of y at r = 1
    bool borderline;         // within 1e-12 of a region boundary
};

Near1Classification classify_near_1(double gamma1, double delta1);

struct ClassificationReport {
    Region0 region0;
    Region1 region1;
    Existence existence;
    std::optional<bool> z0_finite;  // withheld when no wave exists
    double predicted_theta;
    bool borderline;
};

ClassificationReport classify(const ProblemSpec& spec);

struct ExponentFit {
    double theta_hat = 0.0;
    double kappa_hat = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of log y against log(1-r) over r in (window_lo,
/// window_hi), both inside (0.9, 1). Needs at least 8 grid points in the
/// window.
ExponentFit estimate_exponent(const PhaseSolution& ps, double window_lo, double window_hi);

}  // namespace kppwaves
