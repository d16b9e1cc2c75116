#include "kppwaves/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kppwaves/errors.hpp"

namespace kppwaves {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("MonotoneCubic: nodes must be strictly increasing");

    std::vector<double> d(n - 1);  // secant slopes
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            // Weighted harmonic mean keeps the interpolant monotone.
            double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
            m_[i] = (w0 + w1) / (w0 / d[i - 1] + w1 / d[i]);
        }
    }
    // Fritsch-Carlson limiter at the ends.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
        } else {
            double a = m_[i] / d[i], b = m_[i + 1] / d[i];
            double s = a * a + b * b;
            if (s > 9.0) {
                double tau = 3.0 / std::sqrt(s);
                m_[i] = tau * a * d[i];
                m_[i + 1] = tau * b * d[i];
            }
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t n = x_.size();
    std::size_t i;
    if (x <= x_.front()) {
        i = 0;
    } else if (x >= x_.back()) {
        i = n - 2;
    } else {
        i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    }
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

namespace {

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = fn(lm), frm = fn(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    // Floor the target at the rounding error of the partial sum itself, so an
    // absolute tolerance that is unattainable for a large-magnitude piece
    // (e.g. near a strong endpoint singularity) cannot force full-depth
    // recursion over the whole interval.
    double target = std::max(tol, 4e-16 * std::abs(left + right));
    if (depth <= 0 || std::abs(delta) <= 15.0 * target) return left + right + delta / 15.0;
    return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& fn, double a, double b, double tol,
                 int max_depth) {
    if (a == b) return 0.0;
    double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    double whole = simpson(fa, fm, fb, b - a);
    return adaptive_simpson(fn, a, b, fa, fm, fb, whole, tol, max_depth);
}

double golden_section_max(const std::function<double(double)>& fn, double a, double b,
                          double rel_tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    while (b - a > rel_tol * scale) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = fn(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = fn(x1);
        }
    }
    return 0.5 * (a + b);
}

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("least_squares_line: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    if (n > 2 && sxx > 0) fit.slope_stderr = std::sqrt(ss_res / ((n - 2) * sxx));
    return fit;
}

OdeTrace integrate_ode(const std::function<double(double, double)>& f, double t0, double y0,
                       double t1, const OdeOptions& opts) {
    // Dormand-Prince 5(4) tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                            e7 = -1.0 / 40;

    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double h = opts.initial_step != 0.0 ? std::abs(opts.initial_step) : span / 100.0;
    h = std::min(h, span);

    OdeTrace trace;
    trace.t.push_back(t0);
    trace.y.push_back(y0);

    double t = t0, y = y0;
    double k1 = f(t, y);
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opts.max_steps) throw StepFailure("integrate_ode: step budget exhausted");
        h = std::min(h, std::abs(t1 - t));
        if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
        double hs = dir * h;

        double k2 = f(t + c2 * hs, y + hs * a21 * k1);
        double k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        double k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        double k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        double k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        double ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        double k7 = f(t + hs, ynew);
        double err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y), std::abs(ynew));
        double err_norm = std::abs(err) / scale;

        if (err_norm <= 1.0) {
            t += hs;
            y = ynew;
            k1 = k7;  // FSAL
            trace.t.push_back(t);
            trace.y.push_back(y);
            if (opts.stop && opts.stop(t, y)) return trace;
        }
        double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < opts.min_step && dir * (t1 - t) > 0.0)
            throw StepFailure("integrate_ode: step size underflow");
    }
    return trace;
}

}  // namespace kppwaves
