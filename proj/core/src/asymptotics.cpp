#include "kppwaves/asymptotics.hpp"

#include <cmath>
#include <vector>

#include "kppwaves/errors.hpp"
#include "kppwaves/numerics.hpp"

namespace kppwaves {

const char* to_string(Region0 r) { return r == Region0::M01 ? "M01" : "M02"; }

const char* to_string(Region1 r) {
    switch (r) {
        case Region1::M11: return "M11";
        case Region1::M12: return "M12";
        case Region1::M13: return "M13";
        case Region1::M14: return "M14";
    }
    return "?";
}

const char* to_string(Existence e) { return e == Existence::Exists ? "Exists" : "NoWave"; }

std::pair<Region0, Existence> classify_near_0(double gamma0, double delta0) {
    if (!(gamma0 > 0.0 && delta0 > -1.0 && gamma0 + delta0 > 0.0))
        throw OutOfDomain("classify_near_0: need gamma0 > 0, delta0 > -1, gamma0+delta0 > 0");
    if (gamma0 + delta0 < 1.0) return {Region0::M01, Existence::NoWave};
    return {Region0::M02, Existence::Exists};  // boundary gamma0+delta0 = 1 included
}

Near1Classification classify_near_1(double gamma1, double delta1) {
    if (!(gamma1 > 0.0 && delta1 > -1.0 && gamma1 + delta1 > 0.0))
        throw OutOfDomain("classify_near_1: need gamma1 > 0, delta1 > -1, gamma1+delta1 > 0");

    const double sigma = gamma1 + delta1;
    Near1Classification out{};
    if (sigma <= 1.0) {
        // M11: gamma1 < 1 + delta1; M12: gamma1 >= 1 + delta1.
        out.region = gamma1 < 1.0 + delta1 ? Region1::M11 : Region1::M12;
        out.predicted_theta = sigma + 1.0;
    } else {
        // M13: gamma1 < 1; M14: gamma1 >= 1.
        out.region = gamma1 < 1.0 ? Region1::M13 : Region1::M14;
        out.predicted_theta = 2.0 * sigma;
    }
    out.z0_finite = out.region == Region1::M11 || out.region == Region1::M13;
    out.borderline = std::abs(sigma - 1.0) < 1e-12 ||
                     std::abs(gamma1 - (1.0 + delta1)) < 1e-12 ||
                     std::abs(gamma1 - 1.0) < 1e-12;
    return out;
}

ClassificationReport classify(const ProblemSpec& spec) {
    auto [region0, existence] = classify_near_0(spec.gamma0, spec.delta0);
    auto near1 = classify_near_1(spec.gamma1, spec.delta1);
    ClassificationReport report;
    report.region0 = region0;
    report.region1 = near1.region;
    report.existence = existence;
    report.predicted_theta = near1.predicted_theta;
    report.borderline = near1.borderline;
    // The z0 verdict only means something when a wave exists at all.
    if (existence == Existence::Exists) report.z0_finite = near1.z0_finite;
    return report;
}

ExponentFit estimate_exponent(const PhaseSolution& ps, double window_lo, double window_hi) {
    if (!(window_lo > 0.9 && window_hi > window_lo && window_hi < 1.0))
        throw OutOfDomain("estimate_exponent: window must lie inside (0.9, 1)");

    std::vector<double> x, y;
    for (std::size_t i = 0; i < ps.grid.size(); ++i) {
        double r = ps.grid[i];
        if (r > window_lo && r < window_hi && ps.y[i] > 0.0) {
            x.push_back(std::log(1.0 - r));
            y.push_back(std::log(ps.y[i]));
        }
    }
    if (x.size() < 8)
        throw InsufficientSamples("estimate_exponent: fewer than 8 samples in the window");

    LinearFit fit = least_squares_line(x, y);
    return {fit.slope, std::exp(fit.intercept), fit.r2};
}

}  // namespace kppwaves
