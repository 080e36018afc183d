#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "hvf/estimates.hpp"
#include "hvf/gamma.hpp"

namespace hvf {

/// Superlevel set Omega_r(x) = {Gamma(x;.) > 1/r} with its extracted boundary
/// contour (closed polyline).
struct LevelSet {
    std::vector<double> pole;
    double r = 0;
    std::vector<std::array<double, 2>> polyline;  // closed: last edge wraps
    double min_grad = 0;                          // min |grad Gamma_x| on vertices

    double area() const {
        double a = 0;
        for (std::size_t i = 0; i < polyline.size(); ++i) {
            const auto& p = polyline[i];
            const auto& q = polyline[(i + 1) % polyline.size()];
            a += p[0] * q[1] - q[0] * p[1];
        }
        return 0.5 * std::abs(a);
    }
};

/// Mean-value machinery over the superlevel sets of Gamma: the surface and
/// solid operators m_r, M_r, the deficit functionals and the A.8 integral.
class PotentialTheory {
public:
    using Fn = std::function<double(double, double)>;

    explicit PotentialTheory(const GammaGrushin& G, double alpha = 3.0)
        : G_(G), alpha_(alpha) {
        // alpha must exceed 2/(q-2) = 2 for q = 3
        if (!(alpha_ > 2.0))
            throw std::invalid_argument("PotentialTheory: alpha must be > 2/(q-2) = 2");
    }

    double alpha() const { return alpha_; }

    double gamma_x(const std::vector<double>& x, double y1, double y2) const {
        return G_.closed_form(x, {y1, y2});
    }

    /// Offset evaluations around the pole (valid for offsets far below
    /// |x| * eps, where absolute coordinates would collapse onto the pole).
    double gamma_rel(const std::vector<double>& x, double d1, double d2) const {
        return G_.closed_form_rel(x, d1, d2);
    }

    double solid_kernel_rel(const std::vector<double>& x, double d1, double d2) const {
        auto g = G_.grad_y_rel(x, d1, d2);
        double y1 = x[0] + d1;
        double num = g[0] * g[0] + y1 * y1 * g[1] * g[1];
        return num * std::pow(gamma_rel(x, d1, d2), -(2.0 + alpha_));
    }

    /// Surface kernel K_x = sum |X_j Gamma_x|^2 / |grad Gamma_x|.
    double surface_kernel(const std::vector<double>& x, double y1, double y2) const {
        auto g = G_.grad_y(x, {y1, y2});
        double num = g[0] * g[0] + y1 * y1 * g[1] * g[1];
        double den = std::hypot(g[0], g[1]);
        return num / den;
    }

    /// Solid kernel K^alpha_x = sum |X_j Gamma_x|^2 / Gamma_x^{2+alpha}.
    double solid_kernel(const std::vector<double>& x, double y1, double y2) const {
        auto g = G_.grad_y(x, {y1, y2});
        double num = g[0] * g[0] + y1 * y1 * g[1] * g[1];
        return num * std::pow(gamma_x(x, y1, y2), -(2.0 + alpha_));
    }

    /// First crossing of Gamma_x = 1/r along the ray x + t u(theta); offset
    /// evaluation, and geometric bisection since the crossing can sit at
    /// exponentially small radii for log-type poles.
    double level_radius(const std::vector<double>& x, double theta, double r) const {
        double c = std::cos(theta), s = std::sin(theta);
        auto val = [&](double t) { return gamma_rel(x, t * c, t * s); };
        double level = 1.0 / r;
        double hi = 2.0 * inner_cutoff(x);
        while (val(hi) > level) {
            hi *= 4.0;
            if (hi > 1e12) throw std::runtime_error("level_radius: level never crossed");
        }
        double lo = 0.25 * hi;
        for (int it = 0; it < 200; ++it) {
            double mid = std::sqrt(lo * hi);
            (val(mid) > level ? lo : hi) = mid;
        }
        return std::sqrt(lo * hi);
    }

    /// Marching-squares contour of Gamma_x = 1/r on a bounding mesh, with
    /// each crossing refined by bisection along its grid edge. Degenerate
    /// levels (multiple loops, open chains) are reported as errors.
    LevelSet extract_level_set(const std::vector<double>& x, double r,
                               int mesh = 256) const {
        const double level = 1.0 / r;
        // bounding box from ray probes
        double ex = 0, ey = 0;
        for (int a = 0; a < 64; ++a) {
            double th = 2.0 * M_PI * a / 64;
            double t = level_radius(x, th, r);
            ex = std::max(ex, std::abs(t * std::cos(th)));
            ey = std::max(ey, std::abs(t * std::sin(th)));
        }
        double x0 = x[0] - 1.35 * ex, x1 = x[0] + 1.35 * ex;
        double y0 = x[1] - 1.35 * ey, y1 = x[1] + 1.35 * ey;
        double hx = (x1 - x0) / mesh, hy = (y1 - y0) / mesh;

        std::vector<double> vals((mesh + 1) * (mesh + 1));
        auto V = [&](int i, int j) -> double& { return vals[j * (mesh + 1) + i]; };
        for (int j = 0; j <= mesh; ++j)
            for (int i = 0; i <= mesh; ++i) {
                double px = x0 + i * hx, py = y0 + j * hy;
                double d1 = px - x[0], d2 = py - x[1];
                if (std::abs(d1) < 0.25 * hx && std::abs(d2) < 0.25 * hy) {
                    V(i, j) = 1e300;  // pole cell
                } else {
                    V(i, j) = gamma_x(x, px, py);
                }
            }

        // crossing points keyed by (edge base vertex, horizontal?) with
        // bisection refinement along the edge
        struct Pt {
            double px, py;
        };
        std::map<long, Pt> crossings;
        auto edge_key = [&](int i, int j, bool horiz) {
            return ((long)(j * (mesh + 1) + i) << 1) | (horiz ? 1 : 0);
        };
        auto refine = [&](double ax, double ay, double bx, double by) {
            auto f = [&](double t) {
                return gamma_x(x, ax + t * (bx - ax), ay + t * (by - ay)) - level;
            };
            double lo = 0.0, hi = 1.0;
            double flo = f(lo);
            for (int it = 0; it < 52; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = f(mid);
                if ((flo > 0) == (fm > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double t = 0.5 * (lo + hi);
            return Pt{ax + t * (bx - ax), ay + t * (by - ay)};
        };
        auto cross_at = [&](int i, int j, bool horiz) {
            long key = edge_key(i, j, horiz);
            auto it = crossings.find(key);
            if (it != crossings.end()) return it->second;
            double ax = x0 + i * hx, ay = y0 + j * hy;
            double bx = horiz ? ax + hx : ax, by = horiz ? ay : ay + hy;
            Pt p = refine(ax, ay, bx, by);
            crossings.emplace(key, p);
            return p;
        };

        // marching squares: per cell, connect crossing edges
        std::map<long, std::vector<long>> adj;  // edge key -> neighbor edge keys
        auto link = [&](long a, long b) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        };
        for (int j = 0; j < mesh; ++j)
            for (int i = 0; i < mesh; ++i) {
                bool b0 = V(i, j) > level, b1 = V(i + 1, j) > level;
                bool b2 = V(i + 1, j + 1) > level, b3 = V(i, j + 1) > level;
                int idx = (b0 ? 1 : 0) | (b1 ? 2 : 0) | (b2 ? 4 : 0) | (b3 ? 8 : 0);
                if (idx == 0 || idx == 15) continue;
                long bottom = edge_key(i, j, true);
                long top = edge_key(i, j + 1, true);
                long left = edge_key(i, j, false);
                long right = edge_key(i + 1, j, false);
                switch (idx) {
                    case 1: case 14: link(bottom, left); break;
                    case 2: case 13: link(bottom, right); break;
                    case 4: case 11: link(top, right); break;
                    case 8: case 7: link(top, left); break;
                    case 3: case 12: link(left, right); break;
                    case 6: case 9: link(bottom, top); break;
                    case 5: case 10: {
                        double cx = x0 + (i + 0.5) * hx, cy = y0 + (j + 0.5) * hy;
                        bool cin = gamma_x(x, cx, cy) > level;
                        bool diag = (idx == 5) == cin;
                        if (diag) {
                            link(bottom, right);
                            link(top, left);
                        } else {
                            link(bottom, left);
                            link(top, right);
                        }
                        break;
                    }
                }
            }
        if (adj.empty()) throw std::runtime_error("extract_level_set: no contour in mesh");
        for (const auto& [k, nbrs] : adj)
            if (nbrs.size() != 2)
                throw std::runtime_error("extract_level_set: open or degenerate contour");

        // walk the loop
        LevelSet ls;
        ls.pole = x;
        ls.r = r;
        long start = adj.begin()->first;
        long prev = -1, cur = start;
        do {
            int i = (int)((cur >> 1) % (mesh + 1));
            int j = (int)((cur >> 1) / (mesh + 1));
            Pt p = cross_at(i, j, cur & 1);
            ls.polyline.push_back({p.px, p.py});
            const auto& nbrs = adj.at(cur);
            long nxt = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
            prev = cur;
            cur = nxt;
            if (ls.polyline.size() > adj.size() + 2)
                throw std::runtime_error("extract_level_set: contour walk failed");
        } while (cur != start);
        if (ls.polyline.size() != adj.size())
            throw std::runtime_error("extract_level_set: multiple contour components");

        ls.min_grad = 1e300;
        for (const auto& p : ls.polyline) {
            auto g = G_.grad_y(x, {p[0], p[1]});
            ls.min_grad = std::min(ls.min_grad, std::hypot(g[0], g[1]));
        }
        if (ls.min_grad < 1e-14)
            throw std::runtime_error("extract_level_set: vanishing gradient on contour");
        return ls;
    }

    /// Surface mean m_r(u)(x): line integral of u K_x over the extracted
    /// contour with respect to arc length (trapezoid on the polyline).
    double surface_mean(const LevelSet& ls, const Fn& u) const {
        double acc = 0;
        const auto& P = ls.polyline;
        for (std::size_t i = 0; i < P.size(); ++i) {
            const auto& a = P[i];
            const auto& b = P[(i + 1) % P.size()];
            double fa = u(a[0], a[1]) * surface_kernel(ls.pole, a[0], a[1]);
            double fb = u(b[0], b[1]) * surface_kernel(ls.pole, b[0], b[1]);
            acc += 0.5 * (fa + fb) * std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        return acc;
    }

    double m_r(const std::vector<double>& x, double r, const Fn& u, int mesh = 256) const {
        return surface_mean(extract_level_set(x, r, mesh), u);
    }

    /// Solid mean M_r(u)(x) = (alpha+1)/r^{alpha+1} int_{Omega_r} u K^alpha_x.
    double M_r(const std::vector<double>& x, double r, const Fn& u,
               int n_theta = 192) const {
        auto f = [&](double d1, double d2) {
            return u(x[0] + d1, x[1] + d2) * solid_kernel_rel(x, d1, d2);
        };
        double v = region_integral(x, r, f, n_theta);
        return (alpha_ + 1.0) / std::pow(r, alpha_ + 1.0) * v;
    }

    struct Deficits {
        double q_r = 0, Q_r = 0, omega_r = 0;
    };

    /// q_r, Q_r, omega_r of the sub-mean characterizations; Q_r integrates
    /// q_rho over a trapezoid rho-grid.
    Deficits deficit_functionals(const std::vector<double>& x, double r,
                                 int rho_grid = 12, int n_theta = 128) const {
        Deficits out;
        out.q_r = q_r(x, r, n_theta);
        auto om = [&](double d1, double d2) {
            return std::pow(r, alpha_) - std::pow(gamma_rel(x, d1, d2), -alpha_);
        };
        out.omega_r =
            region_integral(x, r, om, n_theta) / (alpha_ * std::pow(r, alpha_ + 1.0));
        // trapezoid in rho on [0, r]; rho = 0 contributes nothing
        double acc = 0, h = r / rho_grid;
        std::vector<double> vals(rho_grid + 1, 0.0);
        for (int i = 1; i <= rho_grid; ++i) {
            double rho = i * h;
            vals[i] = std::pow(rho, alpha_) * q_r(x, rho, n_theta / 2);
        }
        for (int i = 0; i < rho_grid; ++i) acc += 0.5 * (vals[i] + vals[i + 1]) * h;
        out.Q_r = (alpha_ + 1.0) / std::pow(r, alpha_ + 1.0) * acc;
        return out;
    }

    double q_r(const std::vector<double>& x, double r, int n_theta = 128) const {
        auto f = [&](double d1, double d2) { return gamma_rel(x, d1, d2) - 1.0 / r; };
        return region_integral(x, r, f, n_theta);
    }

    /// A.8 integral int_{Omega_{1/k}(x)} Gamma_x K^alpha_0 dy.
    double a8_integral(const std::vector<double>& x, double k, int n_theta = 128) const {
        std::vector<double> origin = {0.0, 0.0};
        auto f = [&](double d1, double d2) {
            return gamma_rel(x, d1, d2) * solid_kernel(origin, x[0] + d1, x[1] + d2);
        };
        return region_integral(x, 1.0 / k, f, n_theta);
    }

    /// Fitted constant of int_{B(x,r)} d^p / Lambda(x,d) dy <= c r^p over the
    /// surrogate ball (doubling-only integrability bound).
    double lemA8_fit(const VolumeProfile& prof, const std::vector<double>& x, double r,
                     double p, int n_theta = 128) const {
        auto tmax = [&](double th) { return surrogate_ray_radius(x, th, r); };
        auto f = [&](double y1, double y2) {
            double d = grushin_distance_surrogate(x, {y1, y2});
            if (d <= 0) return 0.0;
            return std::pow(d, p) / prof.lambda(x, d);
        };
        auto v = polar_integral(x[0], x[1], f, tmax, 1e-12, n_theta, 1e-7);
        return v.value / std::pow(r, p);
    }

private:
    /// Radial floor for pole-centered quadrature: log-type poles concentrate
    /// superlevel sets at exponentially small radii and need the full double
    /// range; at power-type poles the radicand A ~ t^4 would underflow there,
    /// and a shallow floor already makes the excised mass negligible.
    static double inner_cutoff(const std::vector<double>& x) {
        // the complement 1 - m ~ t^2 must stay representable
        return std::abs(x[0]) > 1e-6 ? 1e-140 : 1e-30;
    }

    /// Integral over Omega_r(x) in polar form around the pole; f receives the
    /// offset (d1, d2) from the pole, radial integration runs in log radius
    /// down to 1e-250 (the pole-excision contribution at that depth is below
    /// (rho/r)^{alpha+1} ~ 1e-8 even for log-type poles).
    double region_integral(const std::vector<double>& x, double r,
                           const std::function<double(double, double)>& f,
                           int n_theta) const {
        double acc = 0;
        const double h = 2.0 * M_PI / n_theta;
        const double t0 = inner_cutoff(x);
        for (int a = 0; a < n_theta; ++a) {
            double th = (a + 0.5) * h;
            double c = std::cos(th), s = std::sin(th);
            double T = level_radius(x, th, r);
            auto g = [&](double w) {
                double t = std::exp(w);
                return f(t * c, t * s) * t * t;  // dt = t dw
            };
            auto gabs = [&](double w) { return std::abs(g(w)); };
            // zero tolerance forces uniform refinement to the depth cap, so the
            // mass estimate resolves integrands concentrated in a small part
            // of the (very long) log-radius range
            double mass =
                adaptive_simpson(gabs, std::log(t0), std::log(T), 0.0, 8).value;
            auto ray = adaptive_simpson(g, std::log(t0), std::log(T),
                                        3e-6 * (std::abs(mass) + 1e-300), 40, 7);
            if (!ray.converged)
                throw std::runtime_error(
                    "region_integral: radial quadrature tolerance not met near the pole");
            acc += ray.value * h;
        }
        return acc;
    }

    const GammaGrushin& G_;
    double alpha_;
};

}  // namespace hvf
