#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "hvf/system.hpp"

namespace hvf {

/// Homogeneous norm S(x) = sum |x_i|^{1/sigma_i}; S(delta_lambda x) = lambda S(x).
inline double hom_norm(const std::vector<int>& sigma, const std::vector<double>& x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::pow(std::abs(x[i]), 1.0 / sigma[i]);
    return s;
}

/// Two-sided CC-distance surrogate for the Grushin k=1 plane:
/// |x1-y1| + sqrt(x1^2 + |x2-y2|) - |x1|.
inline double grushin_distance_surrogate(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    return std::abs(x[0] - y[0]) + std::sqrt(x[0] * x[0] + std::abs(x[1] - y[1])) -
           std::abs(x[0]);
}

/// Flattened term list for fast repeated evaluation of a polynomial at doubles.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Polynomial& p) : arity_(p.context()->arity()) {
        for (const auto& [e, c] : p.terms()) {
            Term t;
            t.coeff = c.to_double();
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) t.vars.push_back((int)i);
            terms_.push_back(std::move(t));
        }
    }

    double eval(const double* x) const {
        double acc = 0;
        for (const auto& t : terms_) {
            double v = t.coeff;
            for (int i : t.vars) v *= x[i];
            acc += v;
        }
        return acc;
    }

private:
    struct Term {
        double coeff = 0;
        std::vector<int> vars;  // repeated indices encode powers
    };
    std::vector<Term> terms_;
    std::size_t arity_ = 0;
};

struct CompiledField {
    std::vector<CompiledPoly> coeffs;
    explicit CompiledField(const VectorField& f) {
        for (const auto& c : f.coeffs) coeffs.emplace_back(c);
    }
};


struct DistanceOptions {
    int segments = 16;
    int restarts = 8;
    int rk_steps = 64;  // total fixed RK4 steps on [0,1]
    double endpoint_tol = 1e-6;
    int bisect_iters = 14;
    int growth_steps = 12;
    int max_iter = 60;  // Gauss-Newton iterations per feasibility solve
    std::uint64_t seed = 1;
    bool use_drift = false;  // drift controls |a0| <= r^2 when enabled
};

struct DistanceResult {
    double r = std::numeric_limits<double>::infinity();
    double endpoint_error = std::numeric_limits<double>::infinity();
    bool feasible = false;
    std::vector<double> controls;  // segments x m, row-major
};

/// Integrates gamma' = sum_j a_j(t) X_j(gamma) for piecewise-constant controls.
inline std::vector<double> integrate_controls(const std::vector<CompiledField>& fields,
                                              const std::optional<CompiledField>& drift,
                                              const std::vector<double>& start,
                                              const std::vector<double>& controls,
                                              const std::vector<double>& drift_controls,
                                              int segments, int rk_steps) {
    const std::size_t n = start.size();
    const std::size_t m = fields.size();
    std::vector<double> y = start;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rhs = [&](const std::vector<double>& state, int seg, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0;
        for (std::size_t j = 0; j < m; ++j) {
            double a = controls[seg * m + j];
            if (a == 0) continue;
            for (std::size_t i = 0; i < n; ++i)
                out[i] += a * fields[j].coeffs[i].eval(state.data());
        }
        if (drift && !drift_controls.empty()) {
            double a0 = drift_controls[seg];
            if (a0 != 0)
                for (std::size_t i = 0; i < n; ++i)
                    out[i] += a0 * drift->coeffs[i].eval(state.data());
        }
    };
    int steps_per_seg = std::max(1, rk_steps / segments);
    double h = 1.0 / (segments * steps_per_seg);
    for (int seg = 0; seg < segments; ++seg) {
        for (int s = 0; s < steps_per_seg; ++s) {
            rhs(y, seg, k1);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            rhs(tmp, seg, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            rhs(tmp, seg, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
            rhs(tmp, seg, k4);
            for (std::size_t i = 0; i < n; ++i)
                y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
    }
    return y;
}

/// Optimization-based upper bound on the CC distance. For a candidate radius
/// r the controls are clamped to [-r, r] through a = r tanh(s) and the smooth
/// endpoint error |end(s) - y|^2 is minimized (Nelder-Mead with warm starts);
/// the smallest feasible r is located by bisection. Any feasible solve yields
/// a genuine upper bound max|a| >= d_X(x,y); infeasibility is reported
/// explicitly rather than returning a silent wrong number.
inline DistanceResult distance_upper_bound(const SystemSpec& spec,
                                           const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           const DistanceOptions& opts = {}) {
    std::vector<CompiledField> fields;
    for (const auto& f : spec.fields) fields.emplace_back(f);
    std::optional<CompiledField> drift;
    if (opts.use_drift && spec.drift) drift.emplace(*spec.drift);

    const int M = opts.segments;
    const int m = spec.m();
    const bool with_drift = opts.use_drift && spec.drift.has_value();
    // control parameters: a_j = r tanh(s), plus a_0 = r^2 tanh(s0) when the
    // drift channel is enabled
    const int dim = M * m + (with_drift ? M : 0);

    // Scale-correct initial radius guess from the homogeneous norm of the gap.
    std::vector<double> gap(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) gap[i] = y[i] - x[i];
    double r0 = std::max(hom_norm(spec.sigma, gap), 1e-6);

    const std::size_t n = x.size();
    std::vector<double> controls(M * m), drift_controls(with_drift ? M : 0);
    auto residual = [&](const std::vector<double>& s, double r, std::vector<double>& out) {
        for (int i = 0; i < M * m; ++i) controls[i] = r * std::tanh(s[i]);
        for (int i = 0; i < (int)drift_controls.size(); ++i)
            drift_controls[i] = r * r * std::tanh(s[M * m + i]);
        auto end = integrate_controls(fields, drift, x, controls, drift_controls, M,
                                      opts.rk_steps);
        double e2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = end[i] - y[i];
            e2 += out[i] * out[i];
        }
        if (!std::isfinite(e2)) {
            for (std::size_t i = 0; i < n; ++i) out[i] = 0;
            return 1e30;
        }
        return std::sqrt(e2);
    };
    // damped Gauss-Newton on the (underdetermined) endpoint equations, taking
    // the minimal-norm step J^T (J J^T)^{-1} residual
    auto solve = [&](std::vector<double>& s, double r) {
        std::vector<double> res(n), res_try(n), trial(dim);
        std::vector<std::vector<double>> J(n, std::vector<double>(dim));
        double err = residual(s, r, res);
        for (int iter = 0; iter < opts.max_iter && err >= 0.1 * opts.endpoint_tol; ++iter) {
            const double fd = 1e-6;
            for (int j = 0; j < dim; ++j) {
                trial = s;
                trial[j] += fd;
                std::vector<double> rp(n), rm(n);
                residual(trial, r, rp);
                trial[j] = s[j] - fd;
                residual(trial, r, rm);
                for (std::size_t i = 0; i < n; ++i) J[i][j] = (rp[i] - rm[i]) / (2 * fd);
            }
            // solve (J J^T + lam I) w = -res, step = J^T w
            std::vector<std::vector<double>> G(n, std::vector<double>(n + 1, 0.0));
            double trace = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    for (int j = 0; j < dim; ++j) G[i][k] += J[i][j] * J[k][j];
            for (std::size_t i = 0; i < n; ++i) trace += G[i][i];
            for (std::size_t i = 0; i < n; ++i) {
                G[i][i] += 1e-12 * trace + 1e-300;
                G[i][n] = -res[i];
            }
            bool singular = false;
            for (std::size_t col = 0; col < n && !singular; ++col) {
                std::size_t piv = col;
                for (std::size_t i = col + 1; i < n; ++i)
                    if (std::abs(G[i][col]) > std::abs(G[piv][col])) piv = i;
                if (G[piv][col] == 0) { singular = true; break; }
                std::swap(G[piv], G[col]);
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == col) continue;
                    double f = G[i][col] / G[col][col];
                    for (std::size_t k = col; k <= n; ++k) G[i][k] -= f * G[col][k];
                }
            }
            if (singular) break;
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = G[i][n] / G[i][i];
            bool improved = false;
            for (double step = 1.0; step > 1e-4; step *= 0.5) {
                for (int j = 0; j < dim; ++j) {
                    double d = 0;
                    for (std::size_t i = 0; i < n; ++i) d += J[i][j] * w[i];
                    trial[j] = std::clamp(s[j] + step * d, -12.0, 12.0);
                }
                double e = residual(trial, r, res_try);
                if (e < err) {
                    s = trial;
                    res = res_try;
                    err = e;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        return err;
    };

    // Seed bank: straight controls, the two bang-bang detour patterns (go out,
    // come back in the first coordinate while pushing the others), and random
    // draws. Each seed runs the full growth + bisection pipeline.
    std::vector<std::vector<double>> seeds;
    {
        std::vector<double> straight(dim, 0.0);
        for (int seg = 0; seg < M; ++seg)
            for (int j = 0; j < m && j < (int)x.size(); ++j)
                straight[seg * m + j] = std::atanh(std::clamp(gap[j] / (2.0 * r0), -0.99, 0.99));
        seeds.push_back(straight);
        for (double sign : {1.0, -1.0}) {
            std::vector<double> tri(dim, 0.0);
            for (int seg = 0; seg < M; ++seg) {
                tri[seg * m + 0] = sign * (seg < M / 2 ? 0.8 : -0.8);
                for (int j = 1; j < m; ++j) tri[seg * m + j] = 0.8;
            }
            seeds.push_back(tri);
        }
        std::mt19937_64 rng(opts.seed * 1000003ull);
        auto uniform = [&rng]() {
            return (double)(rng() >> 11) * (1.0 / 9007199254740992.0) * 2.0 - 1.0;
        };
        while ((int)seeds.size() < std::max(opts.restarts, 3)) {
            std::vector<double> s(dim);
            for (auto& v : s) v = 1.2 * uniform();
            seeds.push_back(std::move(s));
        }
    }

    DistanceResult best;
    for (const auto& seed : seeds) {
        std::vector<double> s = seed;
        // grow r until feasible, restarting from the seed when a solve fails
        double r_hi = r0;
        double err_hi = std::numeric_limits<double>::infinity();
        std::vector<double> s_hi;
        for (int k = 0; k <= opts.growth_steps; ++k) {
            std::vector<double> s_try = s;
            double err = solve(s_try, r_hi);
            if (err < opts.endpoint_tol) {
                err_hi = err;
                s_hi = s_try;
                break;
            }
            if (k == opts.growth_steps && !best.feasible && err < best.endpoint_error) {
                std::vector<double> res_tmp(n);
                residual(s_try, r_hi, res_tmp);
                best = {r_hi, err, false, controls};
            }
            r_hi *= 2.0;
        }
        if (s_hi.empty()) continue;

        // bisect the feasibility threshold with warm-started continuation;
        // on failure retry once from the seed before declaring infeasible
        double r_lo = 0.0;
        for (int it = 0; it < opts.bisect_iters; ++it) {
            double mid = 0.5 * (r_lo + r_hi);
            if (mid <= 0) break;
            std::vector<double> s_try = s_hi;
            double err = solve(s_try, mid);
            if (err >= opts.endpoint_tol) {
                std::vector<double> s_fresh = seed;
                double err2 = solve(s_fresh, mid);
                if (err2 < err) {
                    err = err2;
                    s_try = s_fresh;
                }
            }
            if (err < opts.endpoint_tol) {
                r_hi = mid;
                s_hi = s_try;
                err_hi = err;
            } else {
                r_lo = mid;
            }
        }
        std::vector<double> res_tmp(n);
        residual(s_hi, r_hi, res_tmp);
        double rmax = 0;
        for (double a : controls) rmax = std::max(rmax, std::abs(a));
        for (double a0 : drift_controls)
            rmax = std::max(rmax, std::sqrt(std::abs(a0)));
        if (!best.feasible || rmax < best.r) best = {rmax, err_hi, true, controls};
    }
    return best;
}

}  // namespace hvf
