#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kppwaves {

using ScalarFn = std::function<double(double)>;

/// A reaction-diffusion problem instance: diffusion d(r) > 0 on (0,1),
/// reaction g(r) >= 0 on [0,1] with g(0) = g(1) = 0, plus the declared
/// endpoint power-law exponents and leading coefficients
///   g(r) ~ g0 r^gamma0,    g(r) ~ g1 (1-r)^gamma1,
///   d(r) ~ d0 r^delta0,    d(r) ~ d1 (1-r)^delta1.
struct ProblemSpec {
    ScalarFn diffusion;
    ScalarFn reaction;
    double gamma0 = 1.0, gamma1 = 1.0;
    double delta0 = 0.0, delta1 = 0.0;
    double g0 = 1.0, g1 = 1.0, d0 = 1.0, d1 = 1.0;

    double d(double r) const { return diffusion(r); }
    double g(double r) const { return reaction(r); }

    /// Pure power-law family: d = d0 r^delta0 (1-r)^delta1,
    /// g = g0 r^gamma0 (1-r)^gamma1.
    static ProblemSpec power_law(double gamma0, double delta0, double gamma1, double delta1,
                                 double g0 = 1.0, double g1 = 1.0, double d0 = 1.0,
                                 double d1 = 1.0);
};

struct HypothesisCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    bool passed() const;
};

/// Checks (H1), (H2), the parameter restrictions, and the declared endpoint
/// limits on a Chebyshev-clustered sample grid. Throws SpecViolation /
/// ExponentMismatch on failure; the report lists every check either way.
ValidationReport validate_spec(const ProblemSpec& spec, int samples = 512);

/// f = d*g with its endpoint data: f0 = d0*g0, f1 = d1*g1,
/// sigma0 = gamma0+delta0, sigma1 = gamma1+delta1.
struct CompositeNonlinearity {
    ScalarFn f;
    double f0 = 1.0, f1 = 1.0;
    double sigma0 = 1.0, sigma1 = 1.0;

    double operator()(double r) const { return f(r); }
};

CompositeNonlinearity composite(const ProblemSpec& spec);

/// sup over (0,1) of f(r)/r. Returns +infinity when sigma0 < 1; otherwise
/// the grid maximum refined by golden-section search, including the r->0+
/// limit candidate (f0 when sigma0 = 1).
double compute_mu(const CompositeNonlinearity& f, int samples = 4096);

/// Growth-rate exclusion near r = 0: true when inf over (0, delta) of
/// f(r)/r >= c^2, which rules out a travelling wave with speed c.
bool growth_rate_excludes(const CompositeNonlinearity& f, double c, double delta = 0.25,
                          int samples = 512);

}  // namespace kppwaves
