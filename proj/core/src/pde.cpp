#include "kppwaves/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kppwaves/errors.hpp"

namespace kppwaves {

namespace {

// D(u) = int_0^u d(s) ds on uniform nodes, with power-law subtraction in the
// first and last cells so integrable endpoint singularities are captured by
// the declared exponents.
std::vector<double> primitive_table(const ProblemSpec& spec, const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> D(n, 0.0);
    auto d = [&spec](double s) { return spec.d(s); };

    // First cell: subtract d0 s^delta0.
    {
        double h = nodes[1];
        auto smooth = [&](double s) { return spec.d(s) - spec.d0 * std::pow(s, spec.delta0); };
        double head = spec.d0 * std::pow(h, spec.delta0 + 1.0) / (spec.delta0 + 1.0);
        D[1] = head + integrate(smooth, h * 1e-10, h, 1e-12);
    }
    for (std::size_t i = 2; i < n; ++i) {
        double lo = nodes[i - 1], hi = nodes[i];
        if (i == n - 1) {
            // Last cell: subtract d1 (1-s)^delta1.
            double w = hi - lo;
            auto smooth = [&](double s) {
                return spec.d(s) - spec.d1 * std::pow(1.0 - s, spec.delta1);
            };
            double head = spec.d1 * std::pow(w, spec.delta1 + 1.0) / (spec.delta1 + 1.0);
            D[i] = D[i - 1] + head + integrate(smooth, lo, hi - w * 1e-10, 1e-12);
        } else {
            D[i] = D[i - 1] + integrate(d, lo, hi, 1e-12);
        }
    }
    return D;
}

}  // namespace

Simulator::Simulator(const ProblemSpec& spec, const PdeOptions& opts) : spec_(spec), opts_(opts) {
    const int n = static_cast<int>(std::lround(opts_.domain_length / opts_.h)) + 1;
    x_.resize(n);
    u_.resize(n);
    const double x_left = -0.4 * opts_.domain_length;
    for (int i = 0; i < n; ++i) x_[i] = x_left + i * opts_.h;

    // Smoothed step: 1 for x < 0, 0 for x > 0, linear over 10h.
    const double ramp = 10.0 * opts_.h;
    for (int i = 0; i < n; ++i) u_[i] = std::clamp(0.5 - x_[i] / ramp, 0.0, 1.0);

    std::vector<double> nodes(opts_.lookup_nodes);
    for (int j = 0; j < opts_.lookup_nodes; ++j) nodes[j] = double(j) / (opts_.lookup_nodes - 1);
    std::vector<double> D = primitive_table(spec_, nodes);
    big_d_ = MonotoneCubic(nodes, std::move(D));

    // Effective diffusion bound for the CFL condition: pointwise d away from
    // the endpoints, secant slopes of D across them (finite even when d is
    // singular but integrable).
    double md = 0.0;
    for (int j = 1; j + 1 < opts_.lookup_nodes; ++j) {
        double uj = nodes[j];
        if (uj > 1e-4 && uj < 1.0 - 1e-4) md = std::max(md, spec_.d(uj));
    }
    md = std::max(md, (primitive_diffusion(1e-4) - primitive_diffusion(0.0)) / 1e-4);
    md = std::max(md, (primitive_diffusion(1.0) - primitive_diffusion(1.0 - 1e-4)) / 1e-4);
    max_d_ = md;

    dflux_.resize(n);
}

double Simulator::primitive_diffusion(double u) const {
    return big_d_(std::clamp(u, 0.0, 1.0));
}

double Simulator::stable_dt() const { return opts_.cfl_safety * opts_.h * opts_.h / max_d_; }

double Simulator::mass() const {
    // Trapezoidal weights: with reflective ghosts the semi-discrete flux sum
    // telescopes exactly, so this quantity is conserved to rounding when g = 0.
    double s = 0.5 * (u_.front() + u_.back());
    for (std::size_t i = 1; i + 1 < u_.size(); ++i) s += u_[i];
    return s * opts_.h;
}

void Simulator::step(double dt) {
    if (dt > stable_dt() * (1.0 + 1e-12))
        throw CFLViolation("step: dt exceeds the stability bound 0.4 h^2 / max d");

    const std::size_t n = u_.size();
    const double inv_h2 = 1.0 / (opts_.h * opts_.h);

    for (std::size_t i = 0; i < n; ++i) dflux_[i] = primitive_diffusion(u_[i]);

    auto g_clamped = [this](double u) {
        return (u <= 0.0 || u >= 1.0) ? 0.0 : spec_.g(u);
    };

    std::vector<double>& u = u_;
    std::vector<double> unew(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double lap = (dflux_[i + 1] - 2.0 * dflux_[i] + dflux_[i - 1]) * inv_h2;
        unew[i] = u[i] + dt * (lap + g_clamped(u[i]));
    }
    if (opts_.boundary == BoundaryMode::TravellingWave) {
        unew.front() = 1.0;
        unew.back() = 0.0;
    } else {
        // Reflective ghosts keep the divergence form telescoping (mass
        // conservation when g = 0).
        unew.front() = u[0] + dt * ((2.0 * dflux_[1] - 2.0 * dflux_[0]) * inv_h2 +
                                    g_clamped(u[0]));
        unew.back() = u[n - 1] + dt * ((2.0 * dflux_[n - 2] - 2.0 * dflux_[n - 1]) * inv_h2 +
                                       g_clamped(u[n - 1]));
    }
    u_.swap(unew);
    t_ += dt;

    for (double v : u_)
        if (std::abs(v) > 10.0) throw BlowUp("step: field magnitude exceeded 10");
}

double Simulator::front_position() const {
    const std::size_t n = u_.size();
    const double level = opts_.front_level;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (u_[i] >= level && u_[i + 1] < level) {
            if (i < 10 || i + 10 >= n)
                throw FrontLost("front_position: front within 10h of a boundary");
            double t = (level - u_[i]) / (u_[i + 1] - u_[i]);
            return x_[i] + t * opts_.h + offset_;
        }
    }
    throw FrontLost("front_position: no level crossing");
}

void Simulator::maybe_rewindow() {
    if (opts_.boundary != BoundaryMode::TravellingWave) return;
    const std::size_t n = u_.size();
    std::size_t idx = 0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (u_[i] >= opts_.front_level && u_[i + 1] < opts_.front_level) {
            idx = i;
            found = true;
            break;
        }
    }
    if (!found) return;
    if (double(idx) < opts_.rewindow_fraction * double(n)) return;

    std::size_t target = static_cast<std::size_t>(0.4 * double(n));
    std::size_t k = idx - target;
    for (std::size_t i = 0; i + k < n; ++i) u_[i] = u_[i + k];
    for (std::size_t i = n - k; i < n; ++i) u_[i] = 0.0;
    u_.front() = 1.0;
    offset_ += double(k) * opts_.h;
}

void Simulator::run(double tmax) {
    const double dt = stable_dt();
    const double record_interval = 0.05;
    double next_record = t_;
    while (t_ < tmax - 0.5 * dt) {
        step(dt);
        if (t_ >= next_record) {
            try {
                front_history_.push_back({t_, front_position()});
            } catch (const FrontLost&) {
                // No crossing yet (or drifted off-grid); keep integrating.
            }
            next_record += record_interval;
        }
        maybe_rewindow();
    }
}

std::pair<double, double> Simulator::measure_speed(double window) const {
    std::vector<double> t, x;
    for (const auto& fs : front_history_) {
        if (fs.t >= t_ - window) {
            t.push_back(fs.t);
            x.push_back(fs.x);
        }
    }
    if (t.size() < 8 || t.back() - t.front() < 0.5 * window)
        throw FrontLost("measure_speed: front history does not span the window");
    LinearFit fit = least_squares_line(t, x);
    return {fit.slope, fit.slope_stderr};
}

}  // namespace kppwaves
