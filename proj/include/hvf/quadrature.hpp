#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace hvf {

struct QuadResult {
    double value = 0;
    double error = 0;
    bool converged = true;
    long evals = 0;

    double checked(const std::string& what) const {
        if (!converged)
            throw std::runtime_error("quadrature tolerance not met in " + what +
                                     " (error estimate " + std::to_string(error) + ")");
        return value;
    }
};

namespace detail {

template <typename F>
void adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth, int min_depth,
                          QuadResult& out) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    out.evals += 2;
    double h = b - a;
    double left = h / 12.0 * (fa + 4 * flm + fm);
    double right = h / 12.0 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    // Rounding of the midpoint makes the children widths unequal at relative
    // size eps*(|a|+|b|)/h, which puts a noise floor under delta; below that
    // floor further refinement only chases roundoff.
    const double eps = 2.2e-16;
    double mags = std::abs(left) + std::abs(right);
    double local_floor = (4.0 * eps * (std::abs(a) + std::abs(b)) / h + 8.0 * eps) * mags;
    bool accept =
        min_depth <= 0 && std::abs(delta) <= std::max(15.0 * tol, local_floor);
    if (depth <= 0 || accept) {
        out.value += left + right + delta / 15.0;
        out.error += std::abs(delta) / 15.0;
        if (!accept) out.converged = false;
        return;
    }
    adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_depth - 1,
                         out);
    adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_depth - 1,
                         out);
}

}  // namespace detail

/// Adaptive Simpson with Richardson acceptance. The tolerance is absolute;
/// callers convert relative tolerances with a scale estimate. min_depth
/// forces initial uniform subdivision so integrands concentrated in a small
/// part of a long range cannot be missed by a degenerate first estimate.
template <typename F>
QuadResult adaptive_simpson(const F& f, double a, double b, double abs_tol,
                            int max_depth = 48, int min_depth = 0) {
    QuadResult out;
    if (a == b) return out;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    out.evals = 3;
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, min_depth,
                                 out);
    return out;
}

/// Integral over the real line via the compactification eta = s/(1-s^2),
/// s in (-1,1); suited to integrands decaying at least like |eta|^{-2}.
template <typename F>
QuadResult integrate_real_line(const F& f, double rel_tol, double scale_hint = 1.0) {
    const double eps = 1e-14;
    auto g = [&f](double s) {
        double om = (1.0 - s) * (1.0 + s);  // 1 - s^2, stable near the ends
        double eta = s / om;
        double w = (1.0 + s * s) / (om * om);
        return f(eta) * w;
    };
    // two-pass: a coarse pass estimates the magnitude, the second pass uses an
    // absolute tolerance derived from it
    QuadResult coarse = adaptive_simpson(g, -1.0 + eps, 1.0 - eps,
                                         1e-4 * std::abs(scale_hint) + 1e-300, 22);
    double scale = std::max(std::abs(coarse.value), 1e-12 * std::abs(scale_hint));
    QuadResult fine = adaptive_simpson(g, -1.0 + eps, 1.0 - eps, rel_tol * scale, 48, 6);
    fine.evals += coarse.evals;
    return fine;
}

/// Trapezoid rule for smooth 2*pi-periodic integrands (spectral accuracy).
template <typename F>
double trapezoid_periodic(const F& f, int n) {
    double acc = 0;
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) acc += f(i * h);
    return acc * h;
}

/// Polar integral around a center: int_theta int_{t0}^{T(theta)} f(y(t,theta)) t dt dtheta
/// with y = center + t (cos theta, sin theta). Radial integrals run
/// adaptively, optionally in log-radius for integrands concentrated at the
/// center; the angular rule is the periodic trapezoid.
template <typename F, typename TMax>
QuadResult polar_integral(double cx, double cy, const F& f, const TMax& tmax, double t0,
                          int n_theta, double rel_tol, bool log_radius = false) {
    QuadResult out;
    double acc = 0, err = 0;
    const double h = 2.0 * M_PI / n_theta;
    for (int i = 0; i < n_theta; ++i) {
        double th = i * h;
        double ux = std::cos(th), uy = std::sin(th);
        double T = tmax(th);
        if (!(T > t0)) continue;
        // per-ray tolerance keyed to the |g| mass (zero-tolerance pre-pass
        // refines uniformly, so concentrated or sign-cancelling integrands
        // cannot fake a small scale)
        QuadResult ray;
        if (log_radius) {
            if (!(t0 > 0)) throw std::domain_error("polar_integral: log radius needs t0>0");
            auto g = [&](double s) {
                double t = std::exp(s);
                return f(cx + t * ux, cy + t * uy) * t * t;  // dt = t ds
            };
            auto gabs = [&](double s) { return std::abs(g(s)); };
            double mass = adaptive_simpson(gabs, std::log(t0), std::log(T), 0.0, 8).value;
            ray = adaptive_simpson(g, std::log(t0), std::log(T),
                                   rel_tol * (std::abs(mass) + 1e-300), 44, 8);
        } else {
            auto g = [&](double t) { return f(cx + t * ux, cy + t * uy) * t; };
            auto gabs = [&](double t) { return std::abs(g(t)); };
            double mass = adaptive_simpson(gabs, t0, T, 0.0, 8).value;
            ray = adaptive_simpson(g, t0, T, rel_tol * (std::abs(mass) + 1e-300), 44, 8);
        }
        acc += ray.value;
        err += ray.error;
        out.evals += ray.evals;
        out.converged = out.converged && ray.converged;
    }
    out.value = acc * h;
    out.error = err * h;
    return out;
}

}  // namespace hvf
