#pragma once

#include <functional>
#include <vector>

#include "kppwaves/problem.hpp"

namespace kppwaves {

enum class PhaseStatus { ReachedZero, PositiveAtZero, Clamped };

/// Sampled solution of the backward phase-plane problem
///   dy/dr = 2 (c sqrt(y+) - f(r)),   y(1) = 0,
/// integrated from r = 1 - eps_seed down to r = r_min.
struct PhaseSolution {
    double c = 0.0;
    std::vector<double> grid;  // strictly increasing, in (r_min, 1 - eps_seed]
    std::vector<double> y;
    double y_at_rmin = 0.0;
    double r_min = 0.0;
    double eps_seed = 0.0;
    PhaseStatus status = PhaseStatus::PositiveAtZero;
};

/// Local model y(r) ~ kappa (1-r)^theta near r = 1, used to seed the
/// backward integration off the degenerate endpoint.
struct SeedModel {
    double theta = 0.0;
    double kappa = 0.0;
    double operator()(double r) const;
};

/// Leading-order balance of the phase equation near r = 1:
///   sigma1 < 1:  theta = sigma1 + 1,  kappa = 2 f1 / (sigma1 + 1)
///   sigma1 > 1:  theta = 2 sigma1,    kappa = (f1 / c)^2
///   sigma1 = 1:  theta = 2,           sqrt(kappa) = (-c + sqrt(c^2 + 4 f1)) / 2
/// Ties within 1e-12 of sigma1 = 1 take the border formula.
SeedModel seed_asymptotics(const CompositeNonlinearity& f, double c);

struct PhaseOptions {
    double tol = 1e-10;      // absolute integration tolerance
    double rel_tol = 1e-8;
    double r_min = 1e-6;
    double eps_seed = 1e-6;
    double min_step = 1e-14;
    // Optional early termination for r < 1/2, checked after each accepted
    // step; the second argument is the envelope ratio y / r^2, which stays
    // representable even when y itself underflows. Returning true marks the
    // solution ReachedZero and ends the trace there. The speed bisection
    // uses this to bail out of supercritical probes, which otherwise track
    // the stiff balance branch c*sqrt(y) = f at enormous step counts.
    std::function<bool(double r, double y_over_r2)> early_stop;
};

PhaseSolution solve_phase(const CompositeNonlinearity& f, double c,
                          const PhaseOptions& opts = {});

struct SpeedResult {
    double c_star = 0.0;
    double c_lo = 0.0, c_hi = 0.0;  // final bisection bracket
    double mu = 0.0;
    double upper_bound = 0.0;  // 2 sqrt(mu)
    int iterations = 0;
};

struct SpeedOptions {
    double tol_c = 1e-6;
    int max_iterations = 200;
    bool verify_monotone = true;  // post-hoc predicate check at c*(1 +- 10 tol_c)
    PhaseOptions phase;
};

/// Critical speed by bisection on the predicate
///   solve_phase(f, c).status == ReachedZero,
/// which is monotone in c. Throws NoTravellingWave when mu = +infinity or
/// when the predicate fails at the proven upper bound 2 sqrt(mu).
SpeedResult critical_speed(const CompositeNonlinearity& f, const SpeedOptions& opts = {});

}  // namespace kppwaves
