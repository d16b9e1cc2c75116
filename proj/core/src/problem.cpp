#include "kppwaves/problem.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kppwaves/errors.hpp"
#include "kppwaves/numerics.hpp"

namespace kppwaves {

ProblemSpec ProblemSpec::power_law(double gamma0, double delta0, double gamma1, double delta1,
                                   double g0, double g1, double d0, double d1) {
    ProblemSpec spec;
    spec.gamma0 = gamma0;
    spec.delta0 = delta0;
    spec.gamma1 = gamma1;
    spec.delta1 = delta1;
    spec.g0 = g0;
    spec.g1 = g1;
    spec.d0 = d0;
    spec.d1 = d1;
    spec.diffusion = [d0, delta0, delta1](double r) {
        return d0 * std::pow(r, delta0) * std::pow(1.0 - r, delta1);
    };
    spec.reaction = [g0, gamma0, gamma1](double r) {
        return g0 * std::pow(r, gamma0) * std::pow(1.0 - r, gamma1);
    };
    return spec;
}

bool ValidationReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Chebyshev nodes on (0,1), endpoints excluded.
std::vector<double> cheb_grid(int n) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * (i + 0.5) / n));
    return r;
}

// Relative agreement of the sampled ratio fn(r)/r^e against the declared
// limit at two geometrically spaced radii.
bool limit_matches(const ScalarFn& fn, double exponent, double declared, bool at_one,
                   std::string& detail) {
    bool ok = true;
    for (double eps : {1e-4, 1e-5}) {
        double r = at_one ? 1.0 - eps : eps;
        double base = at_one ? 1.0 - r : r;
        double ratio = fn(r) / std::pow(base, exponent);
        if (!std::isfinite(ratio) || std::abs(ratio - declared) > 0.05 * std::abs(declared)) {
            detail = "sampled ratio " + format_value(ratio) + " at distance " + format_value(eps) +
                     " vs declared " + format_value(declared);
            ok = false;
        }
    }
    return ok;
}

}  // namespace

ValidationReport validate_spec(const ProblemSpec& spec, int samples) {
    if (samples < 16) throw SpecViolation("validate_spec: samples must be >= 16");

    ValidationReport report;
    auto add = [&report](std::string name, bool pass, std::string detail = "") {
        report.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    const auto grid = cheb_grid(samples);

    bool d_positive = true;
    std::string d_detail;
    for (double r : grid) {
        double v = spec.d(r);
        if (!(v > 0.0) || !std::isfinite(v)) {
            d_positive = false;
            d_detail = "d(" + format_value(r) + ") = " + format_value(v);
            break;
        }
    }
    add("H1: d > 0 on (0,1)", d_positive, d_detail);

    bool g_positive = true;
    std::string g_detail;
    for (double r : grid) {
        double v = spec.g(r);
        if (!(v > 0.0) || !std::isfinite(v)) {
            g_positive = false;
            g_detail = "g(" + format_value(r) + ") = " + format_value(v);
            break;
        }
    }
    add("H2: g > 0 on (0,1)", g_positive, g_detail);

    double ge0 = spec.g(0.0), ge1 = spec.g(1.0);
    add("H2: g(0) = g(1) = 0", std::abs(ge0) < 1e-12 && std::abs(ge1) < 1e-12,
        "g(0) = " + format_value(ge0) + ", g(1) = " + format_value(ge1));

    bool params_ok = spec.gamma0 > 0.0 && spec.gamma1 > 0.0 && spec.delta0 > -1.0 &&
                     spec.delta1 > -1.0 && spec.gamma0 + spec.delta0 > 0.0 &&
                     spec.gamma1 + spec.delta1 > 0.0;
    add("parameter restrictions", params_ok,
        params_ok ? "" : "need gamma > 0, delta > -1, gamma+delta > 0 at both endpoints");

    bool coef_ok = spec.g0 > 0.0 && spec.g1 > 0.0 && spec.d0 > 0.0 && spec.d1 > 0.0;
    add("positive leading coefficients", coef_ok);

    if (!d_positive || !g_positive || std::abs(ge0) >= 1e-12 || std::abs(ge1) >= 1e-12)
        throw SpecViolation("d must be positive and g must vanish only at the endpoints: " +
                            (d_detail.empty() ? g_detail : d_detail));
    if (!params_ok) throw SpecViolation("endpoint exponents violate the parameter restrictions");
    if (!coef_ok) throw SpecViolation("endpoint coefficients must be positive");

    struct LimitCase {
        const char* name;
        const ScalarFn& fn;
        double exponent, declared;
        bool at_one;
    };
    const LimitCase cases[] = {
        {"limit d/r^delta0 -> d0", spec.diffusion, spec.delta0, spec.d0, false},
        {"limit d/(1-r)^delta1 -> d1", spec.diffusion, spec.delta1, spec.d1, true},
        {"limit g/r^gamma0 -> g0", spec.reaction, spec.gamma0, spec.g0, false},
        {"limit g/(1-r)^gamma1 -> g1", spec.reaction, spec.gamma1, spec.g1, true},
    };
    for (const auto& lc : cases) {
        std::string detail;
        bool ok = limit_matches(lc.fn, lc.exponent, lc.declared, lc.at_one, detail);
        add(lc.name, ok, detail);
        if (!ok) throw ExponentMismatch(std::string(lc.name) + ": " + detail);
    }
    return report;
}

CompositeNonlinearity composite(const ProblemSpec& spec) {
    CompositeNonlinearity f;
    ScalarFn d = spec.diffusion, g = spec.reaction;
    f.f = [d, g](double r) { return d(r) * g(r); };
    f.f0 = spec.d0 * spec.g0;
    f.f1 = spec.d1 * spec.g1;
    f.sigma0 = spec.gamma0 + spec.delta0;
    f.sigma1 = spec.gamma1 + spec.delta1;
    return f;
}

double compute_mu(const CompositeNonlinearity& f, int samples) {
    if (f.sigma0 < 1.0) return std::numeric_limits<double>::infinity();

    auto ratio = [&f](double r) { return f(r) / r; };

    // Sample grid: Chebyshev in the interior plus log-spaced points near 0,
    // where the supremum may be approached.
    std::vector<double> grid = cheb_grid(samples);
    for (double r = 0.5; r > 1e-9; r *= 0.5) grid.push_back(r);

    double best = 0.0, best_r = 0.5;
    for (double r : grid) {
        double v = ratio(r);
        if (v > best) {
            best = v;
            best_r = r;
        }
    }

    // Refine around the discrete argmax.
    double lo = std::max(best_r * 0.5, 1e-12);
    double hi = std::min(best_r + (1.0 - best_r) * 0.5, 1.0 - 1e-12);
    double r_star = golden_section_max(ratio, lo, hi, 1e-8);
    best = std::max(best, ratio(r_star));

    // Endpoint limit candidate at r -> 0+ (0 when sigma0 > 1).
    if (f.sigma0 == 1.0) best = std::max(best, f.f0);
    return best;
}

bool growth_rate_excludes(const CompositeNonlinearity& f, double c, double delta, int samples) {
    double inf_ratio = std::numeric_limits<double>::infinity();
    // Log-spaced samples cover the approach to r = 0.
    for (int i = 0; i < samples; ++i) {
        double r = delta * std::pow(1e-8 / delta, double(i) / (samples - 1));
        inf_ratio = std::min(inf_ratio, f(r) / r);
    }
    return inf_ratio >= c * c;
}

}  // namespace kppwaves
