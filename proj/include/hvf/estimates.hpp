#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hvf/gamma.hpp"
#include "hvf/parallel.hpp"
#include "hvf/volume.hpp"

namespace hvf {

/// Outcome of one verification experiment: fitted constants with the grid
/// that produced them, and explicit pass/fail gates.
struct EstimateReport {
    std::string experiment;
    std::map<std::string, double> constants;
    double worst_ratio = 0;
    std::string sample;
    bool pass = false;
    std::vector<std::string> notes;

    void gate(const std::string& name, bool ok) {
        notes.push_back(std::string(ok ? "PASS " : "FAIL ") + name);
        pass = pass && ok;
    }
};

struct VerifierOptions {
    std::uint64_t seed = 7;
    int pairs = 1500;       // base grid; refinement doubles it
    double dmin = 1e-3;
    double dmax = 1.0;
    double box = 2.0;       // compact set K = [-box, box]^2
    double stability_tol = 0.20;
    int rays = 8;           // fixed-pole directions
    int theta_nodes = 96;   // annulus quadrature
};

/// Solves d_surr(x, x + t u(theta)) = d for t by bisection; the surrogate is
/// strictly increasing along rays.
inline double surrogate_ray_radius(const std::vector<double>& x, double theta, double d) {
    double ux = std::cos(theta), uy = std::sin(theta);
    auto dist = [&](double t) {
        return grushin_distance_surrogate(x, {x[0] + t * ux, x[1] + t * uy});
    };
    double hi = 1.0;
    while (dist(hi) < d) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (dist(mid) < d ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Empirical verification of the two-sided estimates, derivative bounds and
/// singular-kernel properties on the Grushin plane. All |B_X| occurrences use
/// Lambda and all d_X the explicit surrogate; unknown structural constants are
/// absorbed into fitted constants with stability gates.
class EstimatesVerifier {
public:
    EstimatesVerifier(const GammaGrushin& G, VolumeProfile prof)
        : G_(G), prof_(std::move(prof)) {}

    double surrogate(const std::vector<double>& x, const std::vector<double>& y) const {
        return grushin_distance_surrogate(x, y);
    }

    /// Upper estimate, n=2: Gamma <= C0 (d^2/Lambda(x,d)) log(R0/d) uniformly
    /// on K; fits the smallest C0 and gates refinement stability.
    EstimateReport verify_upper_n2(const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "upper_n2";
        rep.pass = true;
        const double R0 = 3.0 * diameter(opts) + 1.0;
        auto pairs = sample_pairs(opts, 2 * opts.pairs);
        std::vector<double> ratios(pairs.size());
        parallel_for(pairs.size(), [&](std::size_t i) {
            const auto& [x, y] = pairs[i];
            double d = surrogate(x, y);
            double bound = d * d / prof_.lambda(x, d) * std::log(R0 / d);
            ratios[i] = G_.closed_form(x, y) / bound;
        });
        double c_half = 0, c_full = 0;
        for (int i = 0; i < (int)pairs.size(); ++i) {
            if (i < opts.pairs) c_half = std::max(c_half, ratios[i]);
            c_full = std::max(c_full, ratios[i]);
        }
        rep.constants["C0"] = c_full;
        rep.constants["R0"] = R0;
        rep.worst_ratio = c_full;
        rep.sample = std::to_string(2 * opts.pairs) + " pairs in [-" +
                     std::to_string(opts.box) + "," + std::to_string(opts.box) + "]^2";
        rep.gate("C0 finite", std::isfinite(c_full) && c_full > 0);
        rep.gate("refinement stability",
                 c_full <= (1.0 + opts.stability_tol) * c_half);

        // product-form sequence x(eps) = (eps, 2eps^4), y(eps) = (eps, eps^4):
        // the ratio to the bound stays within [1/4, 4] of its median
        std::vector<double> seq;
        for (double eps = 0.1; eps > 0.003; eps *= 0.72) {
            std::vector<double> xs = {eps, 2 * std::pow(eps, 4)};
            std::vector<double> ys = {eps, std::pow(eps, 4)};
            double d = surrogate(xs, ys);
            double bound = d * d / prof_.lambda(xs, d) * std::log(R0 / d);
            seq.push_back(G_.closed_form(xs, ys) / bound);
        }
        std::vector<double> sorted = seq;
        std::sort(sorted.begin(), sorted.end());
        double med = sorted[sorted.size() / 2];
        bool prod_ok = true;
        for (double v : seq) prod_ok = prod_ok && v >= med / 4.0 && v <= 4.0 * med;
        rep.constants["product_ratio_median"] = med;
        rep.gate("product-form sequence within [1/4,4] of median", prod_ok);

        // x1 = y1 = 0 subfamily: bound reduces to power * log, ratio finite
        double axis_max = 0;
        for (double x2 = -1.0; x2 <= 1.0; x2 += 0.21) {
            for (double gap : {1e-3, 1e-2, 0.4}) {
                std::vector<double> xs = {0.0, x2}, ys = {0.0, x2 + gap};
                double d = surrogate(xs, ys);
                double bound = d * d / prof_.lambda(xs, d) * std::log(R0 / d);
                axis_max = std::max(axis_max, G_.closed_form(xs, ys) / bound);
            }
        }
        rep.constants["C0_axis"] = axis_max;
        rep.gate("axis subfamily finite", std::isfinite(axis_max));
        return rep;
    }

    /// Lower estimate, n=2: Gamma >= C1 log(R1/d) with R1 > sup d on K.
    EstimateReport verify_lower_n2(const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "lower_n2";
        rep.pass = true;
        const double R1 = 1.2 * diameter(opts);
        auto pairs = sample_pairs(opts, 2 * opts.pairs);
        std::vector<double> ratios(pairs.size());
        parallel_for(pairs.size(), [&](std::size_t i) {
            const auto& [x, y] = pairs[i];
            double d = surrogate(x, y);
            ratios[i] = G_.closed_form(x, y) / std::log(R1 / d);
        });
        double c_half = 1e300, c_full = 1e300;
        for (int i = 0; i < (int)pairs.size(); ++i) {
            if (i < opts.pairs) c_half = std::min(c_half, ratios[i]);
            c_full = std::min(c_full, ratios[i]);
        }
        rep.constants["C1"] = c_full;
        rep.constants["R1"] = R1;
        rep.worst_ratio = c_full;
        rep.sample = std::to_string(2 * opts.pairs) + " pairs";
        rep.gate("C1 positive", c_full > 0);
        rep.gate("refinement stability",
                 c_full >= (1.0 - opts.stability_tol) * c_half);

        // pole (1,0): Gamma / log(1/d) approaches a positive limit
        {
            std::vector<double> x = {1.0, 0.0};
            double lo = 1e300, hi = 0;
            for (double d : {1e-3, 1e-4, 1e-5}) {
                double t = surrogate_ray_radius(x, 0.3, d);
                std::vector<double> y = {x[0] + t * std::cos(0.3), x[1] + t * std::sin(0.3)};
                double v = G_.closed_form(x, y) / std::log(1.0 / d);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            rep.constants["log_limit_low"] = lo;
            rep.constants["log_limit_high"] = hi;
            rep.gate("log-case positive limit", lo > 0 && hi / lo < 3.0);
        }
        // pole (0,0): Gamma * d approaches a positive limit (power case)
        {
            std::vector<double> x = {0.0, 0.0};
            double lo = 1e300, hi = 0;
            for (double d : {1e-3, 1e-4, 1e-5}) {
                double t = surrogate_ray_radius(x, 1.1, d);
                std::vector<double> y = {t * std::cos(1.1), t * std::sin(1.1)};
                double v = G_.closed_form(x, y) * d;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            rep.constants["power_limit_low"] = lo;
            rep.gate("power-case positive limit", lo > 0 && hi / lo < 3.0);
        }
        // far pairs: Gamma bounded away from 0
        {
            double dm = 0.5 * diameter(opts);
            double minv = 1e300;
            auto far_pairs = sample_pairs(opts, 200, dm, diameter(opts));
            for (const auto& [x, y] : far_pairs)
                minv = std::min(minv, G_.closed_form(x, y));
            rep.constants["far_min"] = minv;
            rep.gate("far pairs bounded below", minv > 0);
        }
        return rep;
    }

    /// Fixed-pole two-sided estimate: Gamma/F within [gamma1, gamma2] with
    /// gamma2/gamma1 <= 10; F = log(1/d) when f_2(x) > 0, else d^2/Lambda.
    EstimateReport verify_fixed_pole(const std::vector<double>& pole,
                                     const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "fixed_pole";
        rep.pass = true;
        bool log_case = prof_.f(2, pole) > 0;
        double eps_x = log_case ? 0.1 : 0.5;
        // Base sequences approach the pole along rays; the scaled experiment
        // repeats them at delta_lam(pole) with the delta_lam-mapped sequence
        // and the ratios pulled back through the exact joint homogeneity
        // Gamma(delta_lam x; delta_lam y) = lam^{2-q} Gamma(x;y).
        auto spread = [&](double lam) {
            std::vector<double> x = {lam * pole[0], lam * lam * pole[1]};
            double g1 = 1e300, g2 = 0;
            for (int rIdx = 0; rIdx < opts.rays; ++rIdx) {
                double th = 2.0 * M_PI * (rIdx + 0.5) / opts.rays;
                for (double d = 1e-5; d <= eps_x * 1.0000001; d *= 3.1622776601) {
                    double t = surrogate_ray_radius(pole, th, d);
                    std::vector<double> y0 = {pole[0] + t * std::cos(th),
                                              pole[1] + t * std::sin(th)};
                    std::vector<double> y = {lam * y0[0], lam * lam * y0[1]};
                    double F = log_case ? std::log(1.0 / d)
                                        : d * d / prof_.lambda(pole, d);
                    double ratio =
                        std::pow(lam, prof_.q - 2) * G_.closed_form(x, y) / F;
                    g1 = std::min(g1, ratio);
                    g2 = std::max(g2, ratio);
                }
            }
            return std::pair{g1, g2};
        };
        auto [g1, g2] = spread(1.0);
        rep.constants["gamma1"] = g1;
        rep.constants["gamma2"] = g2;
        rep.constants["spread"] = g2 / g1;
        rep.worst_ratio = g2 / g1;
        rep.sample = std::to_string(opts.rays) + " rays, d in [1e-5, " +
                     std::to_string(eps_x) + "]";
        rep.gate("two-sided with gamma2/gamma1 <= 10", g1 > 0 && g2 / g1 <= 10.0);

        auto [s1, s2] = spread(2.0);
        rep.constants["spread_scaled"] = s2 / s1;
        rep.gate("spread scale-consistent within 5%",
                 std::abs((s2 / s1) / (g2 / g1) - 1.0) <= 0.05);
        return rep;
    }

    /// Derivative bounds |Z_1...Z_r Gamma| <= C d^{2-r}/Lambda over all words
    /// of length r in the X^x, X^y letters.
    EstimateReport verify_derivative_bounds(int r, const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "deriv_r" + std::to_string(r);
        rep.pass = true;
        auto words = derivative_words(r);
        VerifierOptions o = opts;
        o.dmin = std::max(opts.dmin, 1e-2);  // FD noise guard near the diagonal
        auto pairs = sample_pairs(o, 2 * std::max(50, opts.pairs / 8));
        // The ratio field is dilation-invariant and peaks on pairs straddling
        // the degenerate line x1 = 0; a deterministic shape grid over that
        // stratum is sampled alongside the random pairs (coarse grid for the
        // half fit, fine grid for the full one) so the sup saturates and the
        // refinement gate tests reproducibility rather than tail luck.
        auto shape_sup = [&](int na, int nth) {
            double sup = 0;
            for (int ia = 0; ia <= na; ++ia) {
                double a = 1.3 * ia / na;
                for (double b : {0.0, 0.3}) {
                    std::vector<double> x = {-a, b};
                    for (int it = 0; it < nth; ++it) {
                        double th = 2.0 * M_PI * it / nth;
                        double t = surrogate_ray_radius(x, th, 0.5);
                        std::vector<double> y = {x[0] + t * std::cos(th),
                                                 x[1] + t * std::sin(th)};
                        double bound = std::pow(0.5, 2 - r) / prof_.lambda(x, 0.5);
                        for (const auto& w : words)
                            sup = std::max(sup,
                                           std::abs(G_.derivative_fd(x, y, w)) / bound);
                    }
                }
            }
            return sup;
        };
        // nested grids: the fine level contains the coarse nodes
        double c_half = shape_sup(26, 48), c_full = std::max(c_half, shape_sup(52, 96));
        int half = (int)pairs.size() / 2;
        std::vector<double> pair_max(pairs.size(), 0.0);
        parallel_for(pairs.size(), [&](std::size_t i) {
            const auto& [x, y] = pairs[i];
            double d = surrogate(x, y);
            double bound = std::pow(d, 2 - r) / prof_.lambda(x, d);
            for (const auto& w : words)
                pair_max[i] =
                    std::max(pair_max[i], std::abs(G_.derivative_fd(x, y, w)) / bound);
        });
        for (int i = 0; i < (int)pairs.size(); ++i) {
            if (i < half) c_half = std::max(c_half, pair_max[i]);
            c_full = std::max(c_full, pair_max[i]);
        }
        rep.constants["C"] = c_full;
        rep.worst_ratio = c_full;
        rep.sample = std::to_string(pairs.size()) + " pairs x " +
                     std::to_string(words.size()) + " words";
        rep.gate("C finite", std::isfinite(c_full) && c_full > 0);
        rep.gate("refinement stability", c_full <= (1.0 + opts.stability_tol) * c_half);

        // lambda-scaling invariance of the ratio field (both sides are
        // homogeneous of degree 2 - q - r)
        double lam = 2.0, worst = 0;
        for (int i = 0; i < std::min<int>(10, (int)pairs.size()); ++i) {
            const auto& [x, y] = pairs[i];
            std::vector<double> xl = {lam * x[0], lam * lam * x[1]};
            std::vector<double> yl = {lam * y[0], lam * lam * y[1]};
            double d = surrogate(x, y), dl = surrogate(xl, yl);
            for (const auto& w : words) {
                double a = std::abs(G_.derivative_fd(x, y, w)) /
                           (std::pow(d, 2 - r) / prof_.lambda(x, d));
                double b = std::abs(G_.derivative_fd(xl, yl, w)) /
                           (std::pow(dl, 2 - r) / prof_.lambda(xl, dl));
                if (a > 1e-9 * c_full)
                    worst = std::max(worst, std::abs(b / a - 1.0));
            }
        }
        rep.constants["scaling_deviation"] = worst;
        rep.gate("ratio field scale-invariant within 5%", worst <= 0.05);
        return rep;
    }

    /// Cancellation of the singular kernel k(x,y) = X_i^x X_j^x Gamma(x;y):
    /// |int_{r<d<R} k| stays bounded while int |k| grows like log(R/r).
    EstimateReport singular_cancellation(const std::vector<double>& pole, int i, int j,
                                         const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "singular_kernel";
        rep.pass = true;
        auto k_eval = [&](const std::vector<double>& y) {
            return G_.singular_kernel(pole, y, i, j);
        };
        // The annuli shrink the inner radius toward the pole with the outer
        // radius fixed: the inner singularity |k| ~ 1/Lambda(z,d) drives the
        // log(R/r) growth of int|k|, while the signed integral must stay
        // bounded for the principal value to exist. (Toward infinity the
        // kernel decays one order better than the standard estimate - the
        // K''(1/2) = K(1/2) cancellation - so outward ladders saturate.)
        // Within d <= R0 the pole geometry is comparable to Euclidean, so
        // Euclidean rays resolve the annuli uniformly in the angle.
        const double R0 = 0.5;
        std::vector<double> ladder = {10.0, 100.0, 1000.0, 10000.0};
        std::vector<double> signed_vals, abs_vals;
        double A_fit = 0;
        for (double RoverR : ladder) {
            double R = R0;
            double r_in = R0 / RoverR;
            double sgn = 0, abs_ = 0;
            const double h = 2.0 * M_PI / opts.theta_nodes;
            for (int a = 0; a < opts.theta_nodes; ++a) {
                double th = (a + 0.5) * h;
                double c = std::cos(th), s = std::sin(th);
                double t_lo = surrogate_ray_radius(pole, th, r_in);
                double t_hi = surrogate_ray_radius(pole, th, R);
                auto f = [&](double t) {
                    std::vector<double> y = {pole[0] + t * c, pole[1] + t * s};
                    double v = k_eval(y);
                    double d = surrogate(pole, y);
                    A_fit = std::max(A_fit, std::abs(v) * prof_.lambda(pole, d));
                    return v * t;
                };
                auto fabs_ = [&](double t) { return std::abs(f(t)); };
                double mass =
                    std::abs(adaptive_simpson(fabs_, t_lo, t_hi, 0.0, 8).value) + 1e-12;
                auto fs = adaptive_simpson(f, t_lo, t_hi, 3e-7 * mass, 32, 6);
                auto fa = adaptive_simpson(fabs_, t_lo, t_hi, 3e-7 * mass, 32, 6);
                sgn += fs.value * h;
                abs_ += fa.value * h;
            }
            signed_vals.push_back(std::abs(sgn));
            abs_vals.push_back(abs_);
        }
        for (std::size_t t = 0; t < ladder.size(); ++t) {
            rep.constants["signed_" + std::to_string((long)ladder[t])] = signed_vals[t];
            rep.constants["abs_" + std::to_string((long)ladder[t])] = abs_vals[t];
        }
        rep.constants["A"] = A_fit;
        rep.sample = "annuli R=" + std::to_string(R0) + ", R/r in {1e1..1e4}";

        // Boundedness shows as a plateau: over the last two decades of R/r the
        // signed integral varies by at most 3x while the absolute one keeps
        // growing logarithmically. (Near the inner rungs the signed value can
        // pass through zero, which says less than the plateau does.)
        double vmax = std::max({signed_vals[1], signed_vals[2], signed_vals[3]});
        double vmin = std::min({signed_vals[1], signed_vals[2], signed_vals[3]});
        bool bounded = vmax <= 3.0 * vmin || vmax <= 0.1 * abs_vals[1];
        rep.gate("signed integral bounded (<=3x variation over two decades)", bounded);

        double growth = abs_vals[1] / abs_vals[0];
        rep.constants["abs_growth_100_vs_10"] = growth;
        rep.gate("absolute integral grows ~2x from R/r=10 to 100",
                 growth >= 1.6 && growth <= 2.4);

        // log-log slope of int|k| against log(R/r)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t t = 0; t < ladder.size(); ++t) {
            double X = std::log(std::log(ladder[t]));
            double Y = std::log(abs_vals[t]);
            sx += X; sy += Y; sxx += X * X; sxy += X * Y;
        }
        double nn = (double)ladder.size();
        double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        rep.constants["loglog_slope"] = slope;
        rep.worst_ratio = slope;
        rep.gate("log growth slope within 1 +/- 0.3", slope >= 0.7 && slope <= 1.3);
        rep.gate("standard estimate |k| <= A/Lambda with finite A", std::isfinite(A_fit));
        return rep;
    }

    /// Lagrange-theorem oracle: |f(x) - f(x0)| <= sqrt(m) c d(x,x0) sup|Xf|
    /// for f = Gamma(.; y0), with the surrogate scaled by a fitted c.
    EstimateReport lagrange_check(const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "lagrange";
        rep.pass = true;
        std::mt19937_64 rng(opts.seed + 99);
        auto u = [&rng](double a, double b) {
            return a + (b - a) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
        };
        double c_fit = 0;
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<double> y0 = {u(-1.5, 1.5), u(-1.5, 1.5)};
            std::vector<double> x0 = {u(-1.5, 1.5), u(-1.5, 1.5)};
            if (surrogate(x0, y0) < 0.5) continue;
            double ballr = 0.1 * surrogate(x0, y0);
            double th = u(0, 2 * M_PI);
            double t = surrogate_ray_radius(x0, th, ballr);
            std::vector<double> x = {x0[0] + t * std::cos(th), x0[1] + t * std::sin(th)};
            double df = std::abs(G_.closed_form(x, y0) - G_.closed_form(x0, y0));
            // sup |X f| sampled over the segment; f = Gamma(.; y0) and by
            // symmetry the x-gradient is grad_y of Gamma(y0; .)
            double sup = 0;
            for (double s = 0; s <= 1.0; s += 0.1) {
                std::vector<double> p = {x0[0] + s * (x[0] - x0[0]),
                                         x0[1] + s * (x[1] - x0[1])};
                auto g = G_.grad_y(y0, p);
                double xf = std::hypot(g[0], p[0] * g[1]);
                sup = std::max(sup, xf);
            }
            if (sup == 0) continue;
            c_fit = std::max(c_fit, df / (std::sqrt(2.0) * ballr * sup));
        }
        rep.constants["c_equivalence"] = c_fit;
        rep.worst_ratio = c_fit;
        rep.sample = "60 sampled small balls";
        rep.gate("Lagrange bound with bounded equivalence constant", c_fit > 0 && c_fit <= 3.0);
        return rep;
    }

    /// Symmetric-fraction check: H(x,y)/H(y,x) for the bound template stays
    /// within a fixed constant.
    EstimateReport symmetry_fraction(int r, const VerifierOptions& opts = {}) const {
        EstimateReport rep;
        rep.experiment = "bound_symmetry";
        rep.pass = true;
        auto pairs = sample_pairs(opts, 400);
        double worst = 0;
        for (const auto& [x, y] : pairs) {
            double d = surrogate(x, y);
            double hxy = std::pow(d, 2 - r) / prof_.lambda(x, d);
            double hyx = std::pow(d, 2 - r) / prof_.lambda(y, d);
            worst = std::max(worst, std::max(hxy / hyx, hyx / hxy));
        }
        rep.constants["H_ratio_max"] = worst;
        rep.worst_ratio = worst;
        rep.gate("template symmetric up to a structural constant",
                 std::isfinite(worst) && worst <= std::pow(2.0, prof_.q) * 4.0);
        return rep;
    }

private:
    double diameter(const VerifierOptions& opts) const {
        std::vector<double> a = {-opts.box, -opts.box}, b = {opts.box, opts.box};
        return surrogate(a, b);
    }

    std::vector<std::pair<std::vector<double>, std::vector<double>>> sample_pairs(
        const VerifierOptions& opts, int count, double dmin = 0, double dmax = 0) const {
        if (dmin == 0) dmin = opts.dmin;
        if (dmax == 0) dmax = opts.dmax;
        std::mt19937_64 rng(opts.seed);
        auto u = [&rng](double a, double b) {
            return a + (b - a) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
        };
        std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
        while ((int)out.size() < count) {
            std::vector<double> x = {u(-opts.box, opts.box), u(-opts.box, opts.box)};
            double d = dmin * std::pow(dmax / dmin, u(0, 1));
            double th = u(0, 2 * M_PI);
            double t = surrogate_ray_radius(x, th, d);
            std::vector<double> y = {x[0] + t * std::cos(th), x[1] + t * std::sin(th)};
            if (std::abs(y[0]) > opts.box || std::abs(y[1]) > opts.box) continue;
            out.push_back({x, y});
        }
        return out;
    }

    std::vector<std::vector<DerivOp>> derivative_words(int r) const {
        // all (t, s) splits of length r with index words over {1, 2}; x- and
        // y-derivatives commute, so interleavings are redundant
        std::vector<std::vector<DerivOp>> words;
        for (int t = 0; t <= r; ++t) {
            int s = r - t;
            int nx = 1 << t, ny = 1 << s;
            for (int a = 0; a < nx; ++a)
                for (int b = 0; b < ny; ++b) {
                    std::vector<DerivOp> w;
                    for (int k = 0; k < t; ++k) w.push_back({false, ((a >> k) & 1) + 1});
                    for (int k = 0; k < s; ++k) w.push_back({true, ((b >> k) & 1) + 1});
                    words.push_back(std::move(w));
                }
        }
        return words;
    }

    const GammaGrushin& G_;
    VolumeProfile prof_;
};

}  // namespace hvf
