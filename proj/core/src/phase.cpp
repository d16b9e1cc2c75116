#include "kppwaves/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kppwaves/errors.hpp"
#include "kppwaves/numerics.hpp"

namespace kppwaves {

double SeedModel::operator()(double r) const { return kappa * std::pow(1.0 - r, theta); }

SeedModel seed_asymptotics(const CompositeNonlinearity& f, double c) {
    if (!(f.sigma1 > 0.0))
        throw InvalidExponent("seed_asymptotics: requires sigma1 = gamma1 + delta1 > 0");
    if (!(c > 0.0)) throw NonpositiveSpeed("seed_asymptotics: requires c > 0");

    SeedModel m;
    const double s = f.sigma1;
    if (std::abs(s - 1.0) <= 1e-12) {
        // Border case: all three terms balance at order (1-r).
        m.theta = 2.0;
        double sqrt_kappa = 0.5 * (-c + std::sqrt(c * c + 4.0 * f.f1));
        m.kappa = sqrt_kappa * sqrt_kappa;
    } else if (s < 1.0) {
        // dy/dr balances -2f; the speed term is higher order.
        m.theta = s + 1.0;
        m.kappa = 2.0 * f.f1 / (s + 1.0);
    } else {
        // 2c sqrt(y) balances 2f; the derivative term is higher order.
        m.theta = 2.0 * s;
        m.kappa = (f.f1 / c) * (f.f1 / c);
    }
    return m;
}

PhaseSolution solve_phase(const CompositeNonlinearity& f, double c, const PhaseOptions& opts) {
    if (!(c > 0.0)) throw NonpositiveSpeed("solve_phase: speed must be positive");
    if (!(opts.r_min > 0.0 && opts.r_min < 0.5))
        throw SpecViolation("solve_phase: r_min must lie in (0, 1/2)");
    if (!(opts.tol > 0.0)) throw SpecViolation("solve_phase: tol must be positive");

    const SeedModel seed = seed_asymptotics(f, c);

    // The solution follows power laws at both endpoints and spans many
    // orders of magnitude, so integrate Y = log y: positivity is then
    // structural (the y+ clamp never engages on-path) and the error control
    // is relative in y. Near r = 1 the natural abscissa is log(1-r), below
    // r = 1/2 it is log r.
    OdeOptions ode;
    ode.abs_tol = 100.0 * opts.tol;  // ~ relative tolerance on y
    ode.rel_tol = opts.rel_tol;
    ode.min_step = opts.min_step;
    // Cap the log-coordinate step so the recorded grid is dense enough for
    // downstream monotone-cubic interpolation (whose error is O(h^4)).
    ode.max_step = 0.02;

    PhaseSolution sol;
    sol.c = c;
    sol.r_min = opts.r_min;
    sol.eps_seed = opts.eps_seed;

    // Stage 1: s = log(1-r) from log(eps_seed) up to log(1/2).
    auto rhs_near1 = [&f, c](double s, double Y) {
        double w = std::exp(s);
        double r = 1.0 - w;
        return -2.0 * w * (c * std::exp(-0.5 * Y) - f(r) * std::exp(-Y));
    };

    // For theta > 2 the seed branch is strongly attracting backward and the
    // local stiffness c * w / sqrt(y) ~ (c/sqrt(kappa)) w^(1-theta/2) blows
    // up as w -> 0, which an explicit integrator can only track at tiny
    // steps. Start where the stiffness is moderate and fill the gap with
    // the local model itself, which is exactly the branch being tracked;
    // any start-up error decays at the same fast rate.
    double w_start = opts.eps_seed;
    if (seed.theta > 2.0) {
        double w_stiff =
            std::pow(50.0 * std::sqrt(seed.kappa) / c, -2.0 / (seed.theta - 2.0));
        w_start = std::clamp(w_stiff, opts.eps_seed, 0.25);
    }
    std::vector<double> s_model;  // log w of prepended model samples, ascending
    if (w_start > opts.eps_seed) {
        for (double s = std::log(opts.eps_seed); s < std::log(w_start) - 1e-12; s += 0.02)
            s_model.push_back(s);
    }

    double s0 = std::log(w_start);
    double y_seed = seed(1.0 - w_start);
    OdeTrace stage1 = integrate_ode(rhs_near1, s0, std::log(y_seed), std::log(0.5), ode);

    // Stage 2: t = log r from log(1/2) down to log(r_min), in the scaled
    // variable W = log(y / r^2). W stays O(1) on the envelope branch and
    // grows only linearly on the others, so the exponentials below never
    // overflow even for very deep probes.
    auto rhs_near0 = [&f, c](double t, double W) {
        double r = std::exp(t);
        return 2.0 * (c * std::exp(-0.5 * W) - (f(r) / r) * std::exp(-W)) - 2.0;
    };
    bool stopped_early = false;
    if (opts.early_stop) {
        ode.stop = [&opts, &stopped_early](double t, double W) {
            if (opts.early_stop(std::exp(t), std::exp(W))) {
                stopped_early = true;
                return true;
            }
            return false;
        };
    }
    const double lhalf = std::log(0.5);
    OdeTrace stage2 = integrate_ode(rhs_near0, lhalf, stage1.y.back() - 2.0 * lhalf,
                                    std::log(opts.r_min), ode);

    const double W_end = stage2.y.back();

    // Assemble ascending in r; stage 2 already runs from 1/2 down to r_min.
    sol.grid.reserve(s_model.size() + stage1.t.size() + stage2.t.size());
    sol.y.reserve(sol.grid.capacity());
    for (std::size_t i = stage2.t.size(); i-- > 0;) {
        sol.grid.push_back(std::exp(stage2.t[i]));
        sol.y.push_back(std::exp(stage2.y[i] + 2.0 * stage2.t[i]));
    }
    for (double s : s_model) {
        double w = std::exp(s);
        sol.grid.push_back(1.0 - w);
        sol.y.push_back(seed(1.0 - w));
    }
    for (std::size_t i = 0; i + 1 < stage1.t.size(); ++i) {  // skip duplicate r = 1/2
        sol.grid.push_back(1.0 - std::exp(stage1.t[i]));
        sol.y.push_back(std::exp(stage1.y[i]));
    }
    std::reverse(sol.grid.begin() + stage2.t.size(), sol.grid.end());
    std::reverse(sol.y.begin() + stage2.t.size(), sol.y.end());
    sol.y_at_rmin = sol.y.front();

    // Terminal test against the envelope y <= c^2 r^2, carried out on
    // W = log(y/r^2) so deep probe endpoints (where y underflows a double)
    // still compare exactly. The integration keeps the relative error in y
    // near 1e-7, so a small relative slack suffices. A fired early-stop
    // certifies the trajectory is trapped below the envelope.
    if (stopped_early || W_end <= 2.0 * std::log(c) + std::log1p(1e-3)) {
        sol.status = PhaseStatus::ReachedZero;
    } else {
        sol.status = PhaseStatus::PositiveAtZero;
    }
    return sol;
}

SpeedResult critical_speed(const CompositeNonlinearity& f, const SpeedOptions& opts) {
    SpeedResult result;
    result.mu = compute_mu(f);
    if (std::isinf(result.mu))
        throw NoTravellingWave(
            "critical_speed: f(r)/r is unbounded as r -> 0+, no travelling wave exists");
    result.upper_bound = 2.0 * std::sqrt(result.mu);

    // When f(r)/r tends to a positive limit at 0 (sigma0 = 1), subcritical
    // trajectories escape the envelope only after ~ pi/sqrt(f0 - c^2/4)
    // e-folds of log r, which for c near 2 sqrt(f0) is far deeper than any
    // ordinary grid. Probe far below the reporting r_min in that case; the
    // log-space integration makes the extra depth cheap and the terminal
    // test is evaluated in logs, so nothing underflows.
    PhaseOptions probe_opts = opts.phase;
    if (std::abs(f.sigma0 - 1.0) < 1e-12)
        probe_opts.r_min = std::min(opts.phase.r_min, std::exp(-600.0));

    // Running supremum q(r) = sup over (0, r] of f(r')/r', sampled on a log
    // grid over [r_min, 1/2] with a safety factor for the sampling error.
    // Whenever c^2 >= 4 q(r), the root lambda of lambda^2 - c lambda + q = 0
    // gives a region y <= lambda^2 r^2 that the backward flow cannot leave:
    // on its boundary dy/dr = 2(c lambda r - f) >= 2 r (c lambda - q) =
    // 2 lambda^2 r, the slope of the boundary itself. A trajectory caught
    // there is guaranteed to satisfy the terminal test, so the probe can
    // stop immediately instead of crawling along the stiff balance branch.
    const double lr_lo = std::log(probe_opts.r_min), lr_hi = std::log(0.5);
    const int nq = std::max(400, static_cast<int>(30.0 * (lr_hi - lr_lo)));
    std::vector<double> q_grid(nq), q_sup(nq);
    double limit0 = f.sigma0 > 1.0 ? 0.0 : f.f0;
    double running = limit0;
    for (int i = 0; i < nq; ++i) {
        double r = std::exp(lr_lo + (lr_hi - lr_lo) * i / (nq - 1));
        q_grid[i] = r;
        running = std::max(running, f(r) / r);
        q_sup[i] = 1.05 * running;
    }

    auto reaches_zero = [&](double c) {
        PhaseOptions popts = probe_opts;
        popts.early_stop = [&, c](double r, double y_over_r2) {
            auto it = std::upper_bound(q_grid.begin(), q_grid.end(), r);
            if (it == q_grid.end()) it = q_grid.end() - 1;
            double q = q_sup[static_cast<std::size_t>(it - q_grid.begin())];
            if (c * c < 4.0 * q) return false;
            double lambda = 0.5 * (c - std::sqrt(c * c - 4.0 * q));
            return y_over_r2 <= 0.9 * lambda * lambda;
        };
        return solve_phase(f, c, popts).status == PhaseStatus::ReachedZero;
    };

    double c_hi = result.upper_bound;
    if (!reaches_zero(c_hi)) {
        // The bound is sharp (e.g. the classical KPP case); allow a sliver of
        // numerical slack before declaring an inconsistency.
        double c_relaxed = c_hi * (1.0 + 10.0 * opts.tol_c);
        if (!reaches_zero(c_relaxed))
            throw NoTravellingWave(
                "critical_speed: no solution at the proven upper bound 2 sqrt(mu)");
        c_hi = c_relaxed;
    }

    double c_lo = 0.5 * c_hi;
    int halvings = 0;
    while (reaches_zero(c_lo)) {
        c_hi = c_lo;
        c_lo *= 0.5;
        if (++halvings > 60)
            throw BracketFailure("critical_speed: predicate never flips above c = 0");
    }

    int iterations = halvings + 1;
    while (c_hi - c_lo > opts.tol_c && iterations < opts.max_iterations) {
        double mid = 0.5 * (c_lo + c_hi);
        if (reaches_zero(mid)) {
            c_hi = mid;
        } else {
            c_lo = mid;
        }
        ++iterations;
    }

    result.c_lo = c_lo;
    result.c_hi = c_hi;
    result.c_star = 0.5 * (c_lo + c_hi);
    result.iterations = iterations;

    if (opts.verify_monotone) {
        if (!reaches_zero(result.c_star * (1.0 + 10.0 * opts.tol_c)))
            throw BracketFailure("critical_speed: predicate false just above c*");
        if (reaches_zero(result.c_star * (1.0 - 10.0 * opts.tol_c)))
            throw BracketFailure("critical_speed: predicate true just below c*");
    }
    return result;
}

}  // namespace kppwaves
