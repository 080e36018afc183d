#pragma once

#include <optional>
#include <vector>

#include "hvf/polynomial.hpp"

namespace hvf {

/// Polynomial vector field sum_i coeffs[i] * d/dx_i over a base context.
struct VectorField {
    std::vector<Polynomial> coeffs;

    VectorField() = default;
    explicit VectorField(std::vector<Polynomial> c) : coeffs(std::move(c)) {}

    static VectorField zero(const VarContextPtr& ctx) {
        std::vector<Polynomial> c(ctx->arity(), Polynomial::zero(ctx));
        return VectorField(std::move(c));
    }

    std::size_t dim() const { return coeffs.size(); }
    const VarContextPtr& context() const { return coeffs.at(0).context(); }

    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }

    bool operator==(const VectorField& o) const { return coeffs == o.coeffs; }
    bool operator!=(const VectorField& o) const { return !(*this == o); }

    VectorField operator-() const {
        std::vector<Polynomial> c;
        for (const auto& p : coeffs) c.push_back(-p);
        return VectorField(std::move(c));
    }

    VectorField operator+(const VectorField& o) const {
        std::vector<Polynomial> c;
        for (std::size_t i = 0; i < coeffs.size(); ++i) c.push_back(coeffs[i] + o.coeffs[i]);
        return VectorField(std::move(c));
    }

    VectorField operator-(const VectorField& o) const {
        std::vector<Polynomial> c;
        for (std::size_t i = 0; i < coeffs.size(); ++i) c.push_back(coeffs[i] - o.coeffs[i]);
        return VectorField(std::move(c));
    }

    VectorField scale(const Rational& k) const {
        std::vector<Polynomial> c;
        for (const auto& p : coeffs) c.push_back(p.scale(k));
        return VectorField(std::move(c));
    }

    /// X applied to a scalar polynomial: X f = sum_i coeffs[i] * df/dx_i.
    Polynomial apply(const Polynomial& f) const {
        Polynomial r = Polynomial::zero(f.context());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            r += coeffs[i] * f.partial_derivative(i);
        return r;
    }

    template <typename Scalar>
    std::vector<Scalar> evaluate(const std::vector<Scalar>& point) const {
        std::vector<Scalar> v;
        v.reserve(coeffs.size());
        for (const auto& c : coeffs) v.push_back(c.template evaluate<Scalar>(point));
        return v;
    }
};

/// [X,Y]_i = X(Y_i) - Y(X_i), exact.
inline VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    if (X.dim() != Y.dim()) throw ContextError("lie_bracket: dimension mismatch");
    std::vector<Polynomial> c;
    c.reserve(X.dim());
    for (std::size_t i = 0; i < X.dim(); ++i)
        c.push_back(X.apply(Y.coeffs[i]) - Y.apply(X.coeffs[i]));
    return VectorField(std::move(c));
}

/// A field is delta-homogeneous of degree d iff coefficient i is
/// delta-homogeneous of pure degree sigma_i - d (or identically zero).
inline bool is_delta_homogeneous(const VectorField& X, int degree) {
    const auto& w = X.context()->weights;
    for (std::size_t i = 0; i < X.dim(); ++i) {
        if (X.coeffs[i].is_zero()) continue;
        if (w[i] - degree < 0) return false;
        if (!X.coeffs[i].is_delta_homogeneous(w[i] - degree)) return false;
    }
    return true;
}

/// Degree for which the field is homogeneous, if any (zero field has none).
inline std::optional<int> delta_degree_of_field(const VectorField& X) {
    const auto& w = X.context()->weights;
    std::optional<int> deg;
    for (std::size_t i = 0; i < X.dim(); ++i) {
        if (X.coeffs[i].is_zero()) continue;
        auto parts = X.coeffs[i].delta_decompose();
        if (parts.size() != 1) return std::nullopt;
        int d = w[i] - parts.front().first;
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

}  // namespace hvf
