#include "kppwaves/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "kppwaves/errors.hpp"
#include "kppwaves/numerics.hpp"

namespace kppwaves {

namespace {

double logit(double r) { return std::log(r / (1.0 - r)); }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PhaseInterpolant::PhaseInterpolant(const PhaseSolution& ps, const SeedModel& seed) : seed_(seed) {
    if (ps.grid.size() < 4) throw NotASolution("PhaseInterpolant: too few samples");
    std::vector<double> t, w;
    t.reserve(ps.grid.size());
    w.reserve(ps.grid.size());
    for (std::size_t i = 0; i < ps.grid.size(); ++i) {
        if (!(ps.y[i] > 0.0)) continue;  // interpolate in log y; skip nonpositive dips
        double ti = logit(ps.grid[i]);
        if (!t.empty() && !(ti > t.back())) continue;
        t.push_back(ti);
        w.push_back(std::log(ps.y[i]));
    }
    if (t.size() < 4) throw NotASolution("PhaseInterpolant: too few positive samples");
    interp_ = MonotoneCubic(std::move(t), std::move(w));
    r_lo_ = ps.grid.front();
    r_hi_ = ps.grid.back();
    lambda0_ = std::sqrt(std::max(ps.y.front(), 0.0)) / ps.grid.front();
}

double PhaseInterpolant::y(double r) const {
    if (r >= r_hi_) return seed_(r);
    if (r <= r_lo_) return lambda0_ * lambda0_ * r * r;
    return std::exp(interp_(logit(r)));
}

double PhaseInterpolant::sqrt_y(double r) const { return std::sqrt(y(r)); }

namespace {

struct ShellResult {
    FinitenessVerdict verdict = FinitenessVerdict::Undetermined;
    double total = 0.0;  // includes the extrapolated geometric tail when finite
};

// Integrates h over geometrically shrinking shells toward distance 0 from an
// endpoint: shell k covers distances [base 2^{-k-1}, base 2^{-k}].
ShellResult shell_integral(const std::function<double(double)>& h, const ProfileOptions& opts,
                           double base = 0.5) {
    std::vector<double> contrib;
    contrib.reserve(opts.shells);
    double total = 0.0;
    for (int k = 0; k < opts.shells; ++k) {
        double hi = base * std::pow(0.5, k);
        double lo = 0.5 * hi;
        double ik = integrate(h, lo, hi, opts.quad_tol);
        contrib.push_back(ik);
        total += ik;
        if (total > opts.divergence_threshold) return {FinitenessVerdict::Infinite, kInf};
    }

    const int w = opts.stabilization_window;
    double window_sum = 0.0;
    for (int k = opts.shells - w; k < opts.shells; ++k) window_sum += contrib[k];
    if (window_sum < opts.stabilization_tol) return {FinitenessVerdict::Finite, total};

    // Estimate the geometric decay ratio over the trailing window. A power
    // law integrand w^p gives shell contributions with ratio 2^{-(p+1)}, so
    // ratio < 1 certifies an integrable endpoint.
    double ratio_sum = 0.0;
    int ratio_count = 0;
    bool nondecreasing = true;
    for (int k = opts.shells - w; k < opts.shells; ++k) {
        if (contrib[k - 1] > 0.0) {
            ratio_sum += contrib[k] / contrib[k - 1];
            ++ratio_count;
        }
        if (contrib[k] < contrib[k - 1] * (1.0 - 1e-9)) nondecreasing = false;
    }
    if (ratio_count == 0) return {FinitenessVerdict::Undetermined, total};
    double rho = ratio_sum / ratio_count;
    if (nondecreasing || rho >= 0.98) return {FinitenessVerdict::Infinite, kInf};
    if (rho < 0.98) {
        total += contrib.back() * rho / (1.0 - rho);
        return {FinitenessVerdict::Finite, total};
    }
    return {FinitenessVerdict::Undetermined, total};
}

std::vector<double> chebyshev_descending(double lo, double hi, int n) {
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * i / (n - 1));  // 1 -> -1
        u[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
    }
    u.front() = hi;
    u.back() = lo;
    return u;
}

}  // namespace

WaveProfile reconstruct_profile(const ProblemSpec& spec, const PhaseSolution& ps,
                                const ProfileOptions& opts) {
    if (ps.status != PhaseStatus::ReachedZero)
        throw NotASolution("reconstruct_profile: phase solution did not reach zero");

    const CompositeNonlinearity f = composite(spec);
    const SeedModel seed = seed_asymptotics(f, ps.c);
    auto model = std::make_shared<PhaseInterpolant>(ps, seed);

    auto integrand = [&spec, &model](double s) { return spec.d(s) / model->sqrt_y(s); };

    // U samples, descending so the z array comes out increasing.
    std::vector<double> u = chebyshev_descending(ps.grid.front(), ps.grid.back(),
                                                 opts.grid_points);
    if (std::find(u.begin(), u.end(), 0.5) == u.end()) {
        u.push_back(0.5);
        std::sort(u.begin(), u.end(), std::greater<>());
    }

    // Cumulative z with z(1/2) = 0: z(U) = -int_{1/2}^{U} d/sqrt(y).
    const std::size_t n = u.size();
    std::vector<double> z(n, 0.0);
    std::size_t i_half =
        static_cast<std::size_t>(std::find(u.begin(), u.end(), 0.5) - u.begin());
    for (std::size_t i = i_half; i-- > 0;)
        z[i] = z[i + 1] - integrate(integrand, u[i + 1], u[i], opts.quad_tol);
    for (std::size_t i = i_half + 1; i < n; ++i)
        z[i] = z[i - 1] + integrate(integrand, u[i], u[i - 1], opts.quad_tol);

    WaveProfile wp;
    wp.c = ps.c;
    wp.z = std::move(z);
    wp.U = std::move(u);
    wp.y_model = model;

    // z0: improper integral of d/sqrt(y) toward U = 1.
    auto h1 = [&](double w) { return spec.d(1.0 - w) / model->sqrt_y(1.0 - w); };
    ShellResult near1 = shell_integral(h1, opts);
    wp.z0_numeric = near1.verdict;

    // Analytic verdict from the seed exponents: the integrand behaves like
    // (1-U)^(delta1 - theta/2) near 1.
    wp.z0_analytic = (spec.delta1 - seed.theta / 2.0) > -1.0;
    wp.z0_disagreement = (near1.verdict != FinitenessVerdict::Undetermined) &&
                         (wp.z0_analytic != (near1.verdict == FinitenessVerdict::Finite));
    wp.z0_finite = wp.z0_analytic;  // the analytic verdict takes precedence
    wp.z0 = wp.z0_finite ? -near1.total : -kInf;

    // z1: improper integral toward U = 0. No analytic counterpart here;
    // the numeric verdict stands alone.
    auto h0 = [&](double s) { return spec.d(s) / model->sqrt_y(s); };
    ShellResult near0 = shell_integral(h0, opts);
    if (near0.verdict == FinitenessVerdict::Undetermined)
        throw QuadratureDivergenceUndetermined(
            "reconstruct_profile: shell sums for z1 neither stabilize nor diverge");
    wp.z1_numeric = near0.verdict;
    wp.z1_finite = near0.verdict == FinitenessVerdict::Finite;
    wp.z1 = wp.z1_finite ? near0.total : kInf;

    return wp;
}

ProfileResiduals residual_integral_form(const ProblemSpec& spec, const WaveProfile& wp) {
    if (wp.U.size() < 8 || wp.U.front() < 1.0 - 1e-4 || wp.U.back() > 1e-4)
        throw InsufficientSupport(
            "residual_integral_form: samples must cover U in [1e-4, 1-1e-4]");
    if (!wp.y_model)
        throw InsufficientSupport("residual_integral_form: profile lacks its phase model");

    const auto& model = *wp.y_model;
    const std::size_t n = wp.U.size();
    const double u_min = wp.U.back(), u_max = wp.U.front();
    const double f0 = spec.d0 * spec.g0, f1 = spec.d1 * spec.g1;
    const double sigma0 = spec.gamma0 + spec.delta0, sigma1 = spec.gamma1 + spec.delta1;

    // D(U) = int_0^U d(s) ds, cumulative over the sample grid, with a
    // power-law head below the sampled range.
    std::vector<double> D(n);
    D[n - 1] = spec.d0 * std::pow(u_min, spec.delta0 + 1.0) / (spec.delta0 + 1.0);
    for (std::size_t i = n - 1; i-- > 0;)
        D[i] = D[i + 1] + integrate([&spec](double s) { return spec.d(s); }, wp.U[i + 1], wp.U[i],
                                    1e-12);

    // Tail of int g(U) dz below the sampled range: dz = d/sqrt(y) dU with
    // y = lambda0^2 s^2, g d = f ~ f0 s^sigma0.
    const double tail_low = f0 * std::pow(u_min, sigma0) / (sigma0 * model.lambda0());
    // Tail above the sampled range, using the seed model y = kappa (1-U)^theta.
    const double q = sigma1 - model.seed().theta / 2.0;
    const double tail_high =
        f1 / std::sqrt(model.seed().kappa) * std::pow(1.0 - u_max, q + 1.0) / (q + 1.0);

    // G[i] = int_{z_i}^{z1} g(U) dz, accumulated from the right in U
    // coordinates (g dz = g d / sqrt(y) dU).
    auto g_dz = [&spec, &model](double s) { return spec.g(s) * spec.d(s) / model.sqrt_y(s); };
    std::vector<double> G(n);
    G[n - 1] = tail_low;
    for (std::size_t i = n - 1; i-- > 0;)
        G[i] = G[i + 1] + integrate(g_dz, wp.U[i + 1], wp.U[i], 1e-12);

    ProfileResiduals res;
    res.res_speed = std::abs(wp.c - (G[0] + tail_high));

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (wp.U[i] > 1.0 - 1e-4 || wp.U[i] < 1e-4) continue;
        double hm = wp.z[i] - wp.z[i - 1];
        double hp = wp.z[i + 1] - wp.z[i];
        // Three-point derivative, exact for quadratics on a nonuniform grid.
        double dDdz = (D[i + 1] * hm * hm - D[i - 1] * hp * hp + D[i] * (hp * hp - hm * hm)) /
                      (hp * hm * (hp + hm));
        double r = std::abs(dDdz + wp.c * wp.U[i] - G[i]);
        res.res_def = std::max(res.res_def, r);
    }
    return res;
}

WaveProfile shifted_and_renormalized(const WaveProfile& wp, double zeta) {
    WaveProfile out = wp;
    for (double& zi : out.z) zi += zeta;
    // Locate the 1/2-crossing and re-anchor it at z = 0.
    double z_half = 0.0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < out.U.size(); ++i) {
        if ((out.U[i] - 0.5) * (out.U[i + 1] - 0.5) <= 0.0) {
            if (out.U[i] == 0.5) {
                z_half = out.z[i];
            } else {
                double t = (0.5 - out.U[i]) / (out.U[i + 1] - out.U[i]);
                z_half = out.z[i] + t * (out.z[i + 1] - out.z[i]);
            }
            found = true;
            break;
        }
    }
    if (!found) throw InsufficientSupport("shifted_and_renormalized: no 1/2-crossing");
    for (double& zi : out.z) zi -= z_half;
    if (out.z0_finite) out.z0 += zeta - z_half;
    if (out.z1_finite) out.z1 += zeta - z_half;
    return out;
}

void write_profile_csv(const std::string& path, const WaveProfile& wp) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_profile_csv: cannot open " + path);
    os << "z,U\n";
    char buf[64];
    for (std::size_t i = 0; i < wp.z.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", wp.z[i], wp.U[i]);
        os << buf;
    }
}

WaveProfile read_profile_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_profile_csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != "z,U")
        throw ParseError("read_profile_csv: expected header 'z,U'", 1, 1);
    WaveProfile wp;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("read_profile_csv: missing comma", lineno, 1);
        wp.z.push_back(std::stod(line.substr(0, comma)));
        wp.U.push_back(std::stod(line.substr(comma + 1)));
    }
    return wp;
}

}  // namespace kppwaves
