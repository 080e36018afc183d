#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "hvf/distance.hpp"
#include "hvf/elliptic.hpp"
#include "hvf/lifting.hpp"
#include "hvf/quadrature.hpp"

namespace hvf {

struct UnsupportedSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite linear combinations sum_h P_h(z) * B(z)^{h/2} over a fixed base
/// polynomial B. Closed under application of polynomial vector fields and
/// under polynomial substitution, which is exactly what iterated lifted
/// derivatives of Gamma_G = gamma0 * W^{-1/2} need.
class RadicalFunction {
public:
    RadicalFunction(Polynomial base, std::map<int, Polynomial> terms)
        : base_(std::move(base)), terms_(std::move(terms)) {
        prune();
    }

    static RadicalFunction power(Polynomial base, int half) {
        auto one = Polynomial::constant(base.context(), Rational(1));
        std::map<int, Polynomial> t;
        t[half] = one;
        return RadicalFunction(std::move(base), std::move(t));
    }

    const Polynomial& base() const { return base_; }
    const std::map<int, Polynomial>& terms() const { return terms_; }

    RadicalFunction apply(const VectorField& V) const {
        std::map<int, Polynomial> out;
        Polynomial VB = V.apply(base_);
        auto add = [&out](int h, const Polynomial& p) {
            if (p.is_zero()) return;
            auto it = out.find(h);
            if (it == out.end()) out.emplace(h, p);
            else it->second += p;
        };
        for (const auto& [h, P] : terms_) {
            add(h, V.apply(P));
            add(h - 2, (P * VB).scale(Rational(h, 2)));
        }
        return RadicalFunction(base_, std::move(out));
    }

    RadicalFunction compose(const std::vector<Polynomial>& images) const {
        std::map<int, Polynomial> out;
        for (const auto& [h, P] : terms_) out.emplace(h, P.substitute(images));
        return RadicalFunction(base_.substitute(images), std::move(out));
    }

    /// True when the function vanishes identically: clearing the common
    /// radical power must yield the zero polynomial.
    bool is_zero_function() const {
        if (terms_.empty()) return true;
        int hmin = terms_.begin()->first;
        Polynomial acc = Polynomial::zero(base_.context());
        for (const auto& [h, P] : terms_) {
            if ((h - hmin) % 2 != 0) return false;  // mixed parity cannot cancel
            acc += P * base_.pow((h - hmin) / 2);
        }
        return acc.is_zero();
    }

    double eval(const std::vector<double>& z) const {
        double b = base_.evaluate<double>(z);
        double s = std::sqrt(b);
        double acc = 0;
        for (const auto& [h, P] : terms_) acc += P.evaluate<double>(z) * powi(s, h);
        return acc;
    }

private:
    static double powi(double s, int h) {
        bool invert = h < 0;
        unsigned e = invert ? -h : h;
        double r = 1, b = s;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return invert ? 1.0 / r : r;
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }

    Polynomial base_;
    std::map<int, Polynomial> terms_;
};

/// Fast evaluator for a RadicalFunction.
class CompiledRadical {
public:
    CompiledRadical() = default;
    explicit CompiledRadical(const RadicalFunction& f) : base_(f.base()) {
        for (const auto& [h, P] : f.terms()) terms_.emplace_back(h, CompiledPoly(P));
    }

    double eval(const double* z) const {
        double b = base_.eval(z);
        double s = std::sqrt(b);
        double acc = 0;
        for (const auto& [h, P] : terms_) {
            double w = 1, f = s;
            unsigned e = (unsigned)(-h);
            while (e) {
                if (e & 1) w *= f;
                f *= f;
                e >>= 1;
            }
            acc += P.eval(z) / w;
        }
        return acc;
    }

private:
    CompiledPoly base_;
    std::vector<std::pair<int, CompiledPoly>> terms_;  // negative half powers
};

/// A derivative word: pairs (in_y, field_index) applied as operators from the
/// outside in; in_y selects whether the field acts in the y or the x slot.
struct DerivOp {
    bool in_y;
    int field;  // 1 or 2
};

/// Numerical fundamental solution machinery for the Grushin operator
/// d_11 + (x1 d_2)^2: the Heisenberg lift, Gamma_G, the saturation integral,
/// the closed form through K(m), calibration of gamma0 and derivative kernels.
class GammaGrushin {
public:
    static bool is_grushin1(const SystemSpec& spec) {
        if (spec.n != 2 || spec.m() != 2 || spec.drift) return false;
        if (spec.sigma != std::vector<int>{1, 2}) return false;
        auto one = Polynomial::constant(spec.ctx, Rational(1));
        auto x1 = Polynomial::variable(spec.ctx, 0);
        return spec.fields[0].coeffs[0] == one && spec.fields[0].coeffs[1].is_zero() &&
               spec.fields[1].coeffs[0].is_zero() && spec.fields[1].coeffs[1] == x1;
    }

    explicit GammaGrushin(const SystemSpec& spec) : lift_(build_lift(spec)) {
        if (!is_grushin1(spec))
            throw UnsupportedSystem(
                "numeric Gamma requires the Grushin k=1 system (Heisenberg lift)");
        // W(x1, x2, xi) = (x1^2 + xi^2)^2 + 16 (x2 - x1 xi / 2)^2
        const auto& z = lift_.zctx;
        auto x1 = Polynomial::variable(z, 0);
        auto x2 = Polynomial::variable(z, 1);
        auto xi = Polynomial::variable(z, 2);
        W_ = (x1 * x1 + xi * xi).pow(2) +
             (x2 - (x1 * xi).scale(Rational(1, 2))).pow(2).scale(Rational(16));
        if (!W_.is_delta_homogeneous(4))
            throw std::logic_error("GammaGrushin: W not homogeneous of degree 4");

        // saturation map g(x, y, eta) = (x,0)^{-1} * (y, eta)
        sat_ctx_ = make_context({"x1", "x2", "y1", "y2", "eta"}, {1, 2, 1, 2, 1});
        std::vector<Polynomial> x0 = {Polynomial::variable(sat_ctx_, 0),
                                      Polynomial::variable(sat_ctx_, 1),
                                      Polynomial::zero(sat_ctx_)};
        std::vector<Polynomial> yeta = {Polynomial::variable(sat_ctx_, 2),
                                        Polynomial::variable(sat_ctx_, 3),
                                        Polynomial::variable(sat_ctx_, 4)};
        std::vector<Polynomial> xinv;
        for (const auto& f : lift_.inverse) xinv.push_back(f.substitute(x0));
        std::vector<Polynomial> images = xinv;
        images.insert(images.end(), yeta.begin(), yeta.end());
        for (const auto& f : lift_.product) sat_map_.emplace_back(f.substitute(images));
        for (const auto& p : sat_map_) sat_compiled_.emplace_back(p);
    }

    const LiftedSystem& lift() const { return lift_; }
    const Polynomial& W() const { return W_; }
    double gamma0() const { return gamma0_; }
    void set_gamma0(double g) { gamma0_ = g; }

    /// Gamma_G(z) = gamma0 ((x1^2+xi^2)^2 + 16 (x2 - x1 xi/2)^2)^{-1/2}.
    double gamma_G(const std::vector<double>& z) const {
        double w = W_.evaluate<double>(z);
        if (w == 0) throw std::domain_error("gamma_G: pole at the origin");
        return gamma0_ / std::sqrt(w);
    }

    RadicalFunction gamma_G_radical() const { return RadicalFunction::power(W_, -1); }

    /// A(x,y) = (x1^2+y1^2)^2 + 4 (x2-y2)^2 and m = 1/2 + x1 y1 / sqrt(A).
    double m_argument(const std::vector<double>& x, const std::vector<double>& y) const {
        double A = radicand(x, y);
        return 0.5 + x[0] * y[0] / std::sqrt(A);
    }

    /// Closed form gamma0 sqrt2 A^{-1/4} K(m); evaluated through the
    /// complement 1 - m with a cancellation-free formula, so it stays accurate
    /// arbitrarily close to the pole.
    double closed_form(const std::vector<double>& x, const std::vector<double>& y) const {
        double A = radicand(x, y);
        if (A == 0) throw std::domain_error("closed_form: pole (x = y on the x2-axis)");
        double sA = std::sqrt(A);
        double p = x[0] * y[0];
        double u;  // 1 - m
        if (p > 0) {
            double d1 = x[0] * x[0] - y[0] * y[0];
            double num = d1 * d1 + 4.0 * (x[1] - y[1]) * (x[1] - y[1]);
            u = num / (2.0 * sA * (sA + 2.0 * p));
        } else {
            u = 0.5 - p / sA;
        }
        if (u <= 0) throw std::domain_error("closed_form: pole (x = y)");
        return gamma0_ * std::sqrt(2.0) * std::pow(A, -0.25) * elliptic_K_complement(u);
    }

    /// Saturation integral gamma0 int_R Gamma_G((x,0)^{-1} * (y,eta)) deta via
    /// the compactified adaptive quadrature.
    QuadResult saturation(const std::vector<double>& x, const std::vector<double>& y,
                          double rel_tol = 1e-10) const {
        double pt[5] = {x[0], x[1], y[0], y[1], 0.0};
        auto f = [&pt, this](double eta) {
            pt[4] = eta;
            double z[3];
            for (int i = 0; i < 3; ++i) z[i] = sat_compiled_[i].eval(pt);
            double s = z[0] * z[0] + z[2] * z[2];
            double c = z[1] - 0.5 * z[0] * z[2];
            return gamma0_ / std::sqrt(s * s + 16.0 * c * c);
        };
        return integrate_real_line(f, rel_tol);
    }

    /// Representation-formula path for derivative words (exact symbolic
    /// X~-kernels under the saturation integral).
    double derivative_quadrature(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::vector<int>& xword,
                                 const std::vector<int>& yword,
                                 double rel_tol = 1e-9) const {
        const CompiledRadical& K = kernel(xword, yword);
        // pure-y words integrate the kernel at (x,0)^{-1}*(y,eta); words with
        // x-derivatives use the swapped base point (y,0)^{-1}*(x,eta)
        bool swap = !xword.empty();
        double pt[5];
        if (swap) {
            pt[0] = y[0]; pt[1] = y[1]; pt[2] = x[0]; pt[3] = x[1];
        } else {
            pt[0] = x[0]; pt[1] = x[1]; pt[2] = y[0]; pt[3] = y[1];
        }
        auto f = [&pt, &K, this](double eta) {
            pt[4] = eta;
            double z[3];
            for (int i = 0; i < 3; ++i) z[i] = sat_compiled_[i].eval(pt);
            return gamma0_ * K.eval(z);
        };
        auto r = integrate_real_line(f, rel_tol);
        return r.checked("derivative_quadrature");
    }

    /// Finite-difference path: nested central differences along the exact
    /// coordinate flows of X1, X2, step scaled by the surrogate distance.
    double derivative_fd(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<DerivOp>& word, double h_rel = 1e-4) const {
        double h = h_rel * grushin_distance_surrogate(x, y);
        return fd_rec(x, y, word, 0, h);
    }

    /// Analytic y-Hessian of the closed form (K'' from the Legendre ODE);
    /// returns (d11, d12, d22).
    std::array<double, 3> hess_y(const std::vector<double>& x,
                                 const std::vector<double>& y) const {
        double A = radicand(x, y);
        double sA = std::sqrt(A);
        auto [K, Kp, Kpp] = elliptic_triple(stable_complement(x, y, A, sA));
        double S = x[0] * x[0] + y[0] * y[0];
        double A1 = 4.0 * y[0] * S;
        double A2 = -8.0 * (x[1] - y[1]);
        double A11 = 4.0 * S + 8.0 * y[0] * y[0];
        double A22 = 8.0;
        double p = x[0] * y[0];
        double iA32 = 1.0 / (A * sA), iA52 = iA32 / A;
        double m1 = x[0] / sA - 0.5 * p * iA32 * A1;
        double m2 = -0.5 * p * iA32 * A2;
        double m11 = -x[0] * iA32 * A1 + 0.75 * p * iA52 * A1 * A1 - 0.5 * p * iA32 * A11;
        double m12 = -0.5 * x[0] * iA32 * A2 + 0.75 * p * iA52 * A1 * A2;
        double m22 = 0.75 * p * iA52 * A2 * A2 - 0.5 * p * iA32 * A22;
        double c = gamma0_ * std::sqrt(2.0);
        double A14 = std::pow(A, -0.25), A54 = A14 / A, A94 = A54 / A;
        auto second = [&](double Ai, double Aj, double Aij, double mi, double mj,
                          double mij) {
            return c * (5.0 / 16.0 * A94 * Ai * Aj * K - 0.25 * A54 * Aij * K -
                        0.25 * A54 * (Ai * Kp * mj + Aj * Kp * mi) +
                        A14 * (Kpp * mi * mj + Kp * mij));
        };
        return {second(A1, A1, A11, m1, m1, m11), second(A1, A2, 0.0, m1, m2, m12),
                second(A2, A2, A22, m2, m2, m22)};
    }

    /// X_i^y X_j^y Gamma(x;y) assembled from the analytic gradient/Hessian
    /// with the model fields X1 = d_1, X2 = y_1 d_2.
    double field_second_y(const std::vector<double>& x, const std::vector<double>& y,
                          int i, int j) const {
        auto H = hess_y(x, y);
        if (i == 1 && j == 1) return H[0];
        if (i == 2 && j == 2) return y[0] * y[0] * H[2];
        if (i == 2 && j == 1) return y[0] * H[1];
        // X1 X2 = d_1 (y1 d_2) = d_2 + y1 d_1 d_2
        return grad_y(x, y)[1] + y[0] * H[1];
    }

    /// Singular kernel k(x,y) = X_i^x X_j^x Gamma(x;y), computed analytically
    /// through the symmetry Gamma(x;y) = Gamma(y;x).
    double singular_kernel(const std::vector<double>& x, const std::vector<double>& y,
                           int i, int j) const {
        return field_second_y(y, x, i, j);
    }

    /// Analytic y-gradient of the closed form (via dK/dm).
    std::array<double, 2> grad_y(const std::vector<double>& x,
                                 const std::vector<double>& y) const {
        double A = radicand(x, y);
        double sA = std::sqrt(A);
        auto [K, Kp, Kpp_unused] = elliptic_triple(stable_complement(x, y, A, sA));
        (void)Kpp_unused;
        double A1 = 4.0 * y[0] * (x[0] * x[0] + y[0] * y[0]);
        double A2 = -8.0 * (x[1] - y[1]);
        double m1 = x[0] / sA - 0.5 * x[0] * y[0] * A1 / (A * sA);
        double m2 = -0.5 * x[0] * y[0] * A2 / (A * sA);
        double c = gamma0_ * std::sqrt(2.0);
        double g1 = c * (-0.25 * std::pow(A, -1.25) * A1 * K + std::pow(A, -0.25) * Kp * m1);
        double g2 = c * (-0.25 * std::pow(A, -1.25) * A2 * K + std::pow(A, -0.25) * Kp * m2);
        return {g1, g2};
    }

    /// Gamma(x; x + delta) directly from the offset: every cancelling
    /// combination (1 - m, x1^2 - y1^2) is formed from delta exactly, so the
    /// evaluation stays accurate for offsets far below |x| * machine epsilon
    /// (log-type superlevel sets shrink like exp(-c/rho) and need this).
    double closed_form_rel(const std::vector<double>& x, double d1, double d2) const {
        double y1 = x[0] + d1;
        double S = x[0] * x[0] + y1 * y1;
        double A = S * S + 4.0 * d2 * d2;
        if (A == 0) throw std::domain_error("closed_form_rel: pole");
        double sA = std::sqrt(A);
        double p = x[0] * y1;
        double u;
        if (p > 0) {
            double dd = -d1 * (2.0 * x[0] + d1);  // x1^2 - y1^2, exact in the offset
            u = (dd * dd + 4.0 * d2 * d2) / (2.0 * sA * (sA + 2.0 * p));
        } else {
            u = 0.5 - p / sA;
        }
        if (u <= 0) throw std::domain_error("closed_form_rel: pole");
        return gamma0_ * std::sqrt(2.0) * std::pow(A, -0.25) * elliptic_K_complement(u);
    }

    /// Offset form of the y-gradient; m_1 is factored as
    /// x1 (S (x1^2-y1^2) + 4 d2^2)/A^{3/2} to avoid the catastrophic
    /// cancellation of the direct formula near the pole.
    std::array<double, 2> grad_y_rel(const std::vector<double>& x, double d1,
                                     double d2) const {
        double y1 = x[0] + d1;
        double S = x[0] * x[0] + y1 * y1;
        double A = S * S + 4.0 * d2 * d2;
        double sA = std::sqrt(A);
        double p = x[0] * y1;
        double dd = -d1 * (2.0 * x[0] + d1);
        double u;
        if (p > 0) {
            u = (dd * dd + 4.0 * d2 * d2) / (2.0 * sA * (sA + 2.0 * p));
        } else {
            u = 0.5 - p / sA;
        }
        auto [K, Kp, Kpp_unused] = elliptic_triple(u);
        (void)Kpp_unused;
        double A1 = 4.0 * y1 * S;
        double A2 = 8.0 * d2;  // -8 (x2 - y2)
        double iA32 = 1.0 / (A * sA);
        double m1 = x[0] * (S * dd + 4.0 * d2 * d2) * iA32;
        double m2 = -4.0 * p * d2 * iA32;
        double c = gamma0_ * std::sqrt(2.0);
        double A54 = std::pow(A, -1.25), A14 = std::pow(A, -0.25);
        return {c * (-0.25 * A54 * A1 * K + A14 * Kp * m1),
                c * (-0.25 * A54 * A2 * K + A14 * Kp * m2)};
    }

    struct Calibration {
        double gamma0 = 0;
        double cross_check_rel = 0;   // gamma0 from the second pole vs the first
        double recovered_rel_err = 0; // -phi recovery at a held-out pole
        bool converged = false;
    };

    /// Compactly supported bump phi = exp(-1/(1 - |y-c|^2/R^2)) with the
    /// analytic Grushin Laplacian L phi = phi_11 + y1^2 phi_22.
    struct Bump {
        double c1, c2, R;
        double operator()(const std::vector<double>& y) const {
            double u = rho2(y);
            if (u >= 1.0) return 0.0;
            return std::exp(-1.0 / (1.0 - u));
        }
        double lap(const std::vector<double>& y) const {
            double u = rho2(y);
            if (u >= 1.0) return 0.0;
            double g = std::exp(-1.0 / (1.0 - u));
            double om = 1.0 - u;
            double gp = -g / (om * om);
            double gpp = g * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
            double u1 = 2.0 * (y[0] - c1) / (R * R);
            double u2 = 2.0 * (y[1] - c2) / (R * R);
            double uii = 2.0 / (R * R);
            double phi11 = gpp * u1 * u1 + gp * uii;
            double phi22 = gpp * u2 * u2 + gp * uii;
            return phi11 + y[0] * y[0] * phi22;
        }
        double rho2(const std::vector<double>& y) const {
            double d1 = (y[0] - c1) / R, d2 = (y[1] - c2) / R;
            return d1 * d1 + d2 * d2;
        }
    };

    /// Solves int Gamma(x;y) L phi(y) dy = -phi(x) for gamma0 by linearity and
    /// verifies self-consistency at independent poles.
    Calibration calibrate(double rel_tol = 1e-7, int n_theta = 256) {
        Bump phi{1.5, 0.5, 1.0};
        std::vector<std::vector<double>> poles = {{1.5, 0.5}, {1.2, 0.3}, {1.8, 0.75}};
        std::vector<double> I;
        for (const auto& x : poles) I.push_back(bump_pairing(x, phi, rel_tol, n_theta));
        Calibration cal;
        cal.gamma0 = -phi(poles[0]) / I[0];
        double g1 = -phi(poles[1]) / I[1];
        cal.cross_check_rel = std::abs(g1 - cal.gamma0) / std::abs(cal.gamma0);
        cal.recovered_rel_err =
            std::abs(cal.gamma0 * I[2] + phi(poles[2])) / std::abs(phi(poles[2]));
        cal.converged = cal.cross_check_rel < 1e-2;
        if (!cal.converged)
            throw CalibrationError("gamma0 calibration failed cross-check (" +
                                   std::to_string(cal.cross_check_rel) + ")");
        gamma0_ = cal.gamma0;
        return cal;
    }

    /// int Gamma-hat(x;y) L phi(y) dy with gamma0 = 1, by polar quadrature
    /// around the (integrable log) singularity at y = x.
    double bump_pairing(const std::vector<double>& x, const Bump& phi, double rel_tol,
                        int n_theta) const {
        double dx = x[0] - phi.c1, dy = x[1] - phi.c2;
        if (dx * dx + dy * dy >= phi.R * phi.R)
            throw std::invalid_argument("bump_pairing: pole outside the bump support");
        auto tmax = [&](double th) {
            double ux = std::cos(th), uy = std::sin(th);
            double b = dx * ux + dy * uy;
            return -b + std::sqrt(phi.R * phi.R - (dx * dx + dy * dy) + b * b);
        };
        auto f = [&](double y1, double y2) {
            std::vector<double> y = {y1, y2};
            double lp = phi.lap(y);
            if (lp == 0.0) return 0.0;
            double A = radicand(x, y);
            if (A == 0) return 0.0;
            double sA = std::sqrt(A);
            double p = x[0] * y[0];
            double u;
            if (p > 0) {
                double d1 = x[0] * x[0] - y[0] * y[0];
                double num = d1 * d1 + 4.0 * (x[1] - y[1]) * (x[1] - y[1]);
                u = num / (2.0 * sA * (sA + 2.0 * p));
            } else {
                u = 0.5 - p / sA;
            }
            if (u <= 0) return 0.0;
            return std::sqrt(2.0) * std::pow(A, -0.25) * elliptic_K_complement(u) * lp;
        };
        auto r = polar_integral(x[0], x[1], f, tmax, 0.0, n_theta, rel_tol);
        return r.value;
    }

private:
    static double radicand(const std::vector<double>& x, const std::vector<double>& y) {
        double s = x[0] * x[0] + y[0] * y[0];
        double d = x[1] - y[1];
        return s * s + 4.0 * d * d;
    }

    /// 1 - m without cancellation (same algebra as closed_form); positive for
    /// x != y.
    static double stable_complement(const std::vector<double>& x,
                                    const std::vector<double>& y, double A, double sA) {
        double p = x[0] * y[0];
        if (p > 0) {
            double d1 = x[0] * x[0] - y[0] * y[0];
            double num = d1 * d1 + 4.0 * (x[1] - y[1]) * (x[1] - y[1]);
            return num / (2.0 * sA * (sA + 2.0 * p));
        }
        return 0.5 - p / sA;
    }

    struct Kvals {
        double K, Kp, Kpp;
    };
    static Kvals elliptic_triple(double u) {
        if (u <= 0) throw std::domain_error("elliptic_triple: pole (x = y)");
        if (u > 0.25) {
            double m = 1.0 - u;
            return {elliptic_K(m), elliptic_K_prime(m), elliptic_K_prime2(m)};
        }
        return {elliptic_K_complement(u), elliptic_K_prime_complement(u),
                elliptic_K_prime2_complement(u)};
    }

    double fd_rec(std::vector<double> x, std::vector<double> y,
                  const std::vector<DerivOp>& word, std::size_t k, double h) const {
        if (k == word.size()) return closed_form(x, y);
        const DerivOp& op = word[k];
        auto flow = [&](std::vector<double> pt, double t) {
            if (op.field == 1) pt[0] += t;
            else pt[1] += t * pt[0];
            return pt;
        };
        std::vector<double> xp = x, xm = x, yp = y, ym = y;
        if (op.in_y) {
            yp = flow(y, h);
            ym = flow(y, -h);
            return (fd_rec(x, yp, word, k + 1, h) - fd_rec(x, ym, word, k + 1, h)) /
                   (2.0 * h);
        }
        xp = flow(x, h);
        xm = flow(x, -h);
        return (fd_rec(xp, y, word, k + 1, h) - fd_rec(xm, y, word, k + 1, h)) / (2.0 * h);
    }

    /// Builds (and caches) the compiled kernel for a derivative word:
    /// pure y: X~_{i1} ... X~_{is} Gamma_G/gamma0;
    /// with x-derivatives: X~_{j1} ... X~_{jt} ((X~_{i...} Gamma_G/gamma0) o iota).
    const CompiledRadical& kernel(const std::vector<int>& xword,
                                  const std::vector<int>& yword) const {
        auto key = std::make_pair(xword, yword);
        auto it = kernel_cache_.find(key);
        if (it != kernel_cache_.end()) return it->second;

        RadicalFunction f = RadicalFunction::power(W_, -1);
        for (auto i = yword.rbegin(); i != yword.rend(); ++i)
            f = f.apply(lift_.lifted[*i - 1]);
        if (!xword.empty()) {
            f = f.compose(lift_.inverse);
            for (auto j = xword.rbegin(); j != xword.rend(); ++j)
                f = f.apply(lift_.lifted[*j - 1]);
        }
        return kernel_cache_.emplace(key, CompiledRadical(f)).first->second;
    }

    LiftedSystem lift_;
    Polynomial W_;
    VarContextPtr sat_ctx_;
    std::vector<Polynomial> sat_map_;
    std::vector<CompiledPoly> sat_compiled_;
    double gamma0_ = 1.0;
    mutable std::map<std::pair<std::vector<int>, std::vector<int>>, CompiledRadical>
        kernel_cache_;
};

}  // namespace hvf
