#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kppwaves/numerics.hpp"
#include "kppwaves/phase.hpp"
#include "kppwaves/problem.hpp"

namespace kppwaves {

/// Evaluates y(r) on the whole of (0,1): monotone cubic interpolation of a
/// PhaseSolution in (logit r, log y) coordinates inside the sampled range,
/// the seed model beyond it near r = 1, and the envelope-consistent local
/// model y = lambda0^2 r^2 below r_min.
class PhaseInterpolant {
  public:
    PhaseInterpolant(const PhaseSolution& ps, const SeedModel& seed);

    double y(double r) const;
    double sqrt_y(double r) const;

    double lambda0() const { return lambda0_; }
    const SeedModel& seed() const { return seed_; }
    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }

  private:
    MonotoneCubic interp_;  // log y vs logit r
    SeedModel seed_;
    double lambda0_;
    double r_lo_, r_hi_;
};

enum class FinitenessVerdict { Finite, Infinite, Undetermined };

struct WaveProfile {
    double c = 0.0;
    std::vector<double> z;  // increasing
    std::vector<double> U;  // decreasing, in [0,1]
    double z0 = 0.0;        // -infinity when the left endpoint is not attained
    double z1 = 0.0;        // +infinity when the right endpoint is not attained
    bool z0_finite = false;
    bool z1_finite = false;
    FinitenessVerdict z0_numeric = FinitenessVerdict::Undetermined;
    FinitenessVerdict z1_numeric = FinitenessVerdict::Undetermined;
    bool z0_analytic = false;      // analytic verdict (takes precedence for z0)
    bool z0_disagreement = false;  // numeric vs analytic mismatch

    std::shared_ptr<const PhaseInterpolant> y_model;  // shared with the residual checker
};

struct ProfileOptions {
    int grid_points = 2048;
    int shells = 40;
    int stabilization_window = 5;
    double stabilization_tol = 1e-8;
    double divergence_threshold = 1e6;
    double quad_tol = 1e-11;
};

/// Inverts the phase-plane substitution: z(U) = -int_{1/2}^{U} d(s)/sqrt(y(s)) ds
/// with z(1/2) = 0, and decides finiteness of z0 and z1 by geometric shell
/// quadrature toward each endpoint.
WaveProfile reconstruct_profile(const ProblemSpec& spec, const PhaseSolution& ps,
                                const ProfileOptions& opts = {});

struct ProfileResiduals {
    double res_def = 0.0;    // sup-residual of the integral form of the TW definition
    double res_speed = 0.0;  // | c - int g(U) dz |
};

ProfileResiduals residual_integral_form(const ProblemSpec& spec, const WaveProfile& wp);

/// Shifts the z-grid by zeta and re-normalizes so that U interpolates 1/2
/// at z = 0 again.
WaveProfile shifted_and_renormalized(const WaveProfile& wp, double zeta);

/// CSV export/import with header "z,U", 17 significant digits (bit-exact
/// round trip).
void write_profile_csv(const std::string& path, const WaveProfile& wp);
WaveProfile read_profile_csv(const std::string& path);

}  // namespace kppwaves
