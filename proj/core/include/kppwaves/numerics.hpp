#pragma once

#include <functional>
#include <vector>

namespace kppwaves {

/// Monotone-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Nodes must be strictly increasing. Evaluation outside the node range
/// clamps to the boundary polynomial.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return x_.empty(); }

  private:
    std::vector<double> x_, y_, m_;  // nodes, values, node slopes
};

/// Adaptive Simpson quadrature of fn over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol = 1e-10, int max_depth = 48);

/// Maximizes a unimodal fn on [a, b] by golden-section search to relative
/// x-accuracy rel_tol. Returns the maximizing abscissa.
double golden_section_max(const std::function<double(double)>& fn, double a, double b,
                          double rel_tol = 1e-8);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
};

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double min_step = 1e-14;
    double initial_step = 0.0;  // 0 => heuristic
    double max_step = 0.0;      // 0 => unbounded
    std::size_t max_steps = 4'000'000;
    // Checked after each accepted step; returning true ends the
    // integration early with the trace recorded so far.
    std::function<bool(double, double)> stop;
};

struct OdeTrace {
    std::vector<double> t;  // abscissae of accepted steps, in integration order
    std::vector<double> y;
};

/// Dormand-Prince 5(4) adaptive integration of the scalar ODE y' = f(t, y)
/// from t0 to t1 (either direction). Every accepted step is recorded,
/// including both endpoints. Throws StepFailure on step underflow.
OdeTrace integrate_ode(const std::function<double(double, double)>& f, double t0, double y0,
                       double t1, const OdeOptions& opts = {});

}  // namespace kppwaves
