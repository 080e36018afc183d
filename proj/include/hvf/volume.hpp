#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "hvf/lie.hpp"

namespace hvf {

namespace detail {

/// Determinant of an n x n polynomial matrix by Laplace expansion (tiny n).
inline Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Polynomial acc = Polynomial::zero(m[0][0].context());
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        Polynomial term = m[0][j] * poly_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace detail

/// Ball-volume profile: for each weight k in [n, q] the determinant
/// polynomials of the weight-k commutator bases; f_k(x) is the sum of their
/// absolute values and Lambda(x, rho) = sum_k f_k(x) rho^k is the two-sided
/// volume surrogate for |B_X(x, rho)|.
struct VolumeProfile {
    int n = 0;
    int q = 0;
    std::map<int, std::vector<Polynomial>> dets;  // weight k -> nonzero dets

    double f(int k, const std::vector<double>& x) const {
        auto it = dets.find(k);
        if (it == dets.end()) return 0.0;
        double s = 0;
        for (const auto& d : it->second) s += std::abs(d.evaluate<double>(x));
        return s;
    }

    Rational f_exact(int k, const std::vector<Rational>& x) const {
        auto it = dets.find(k);
        if (it == dets.end()) return Rational(0);
        Rational s(0);
        for (const auto& d : it->second) s += d.evaluate<Rational>(x).abs();
        return s;
    }

    /// f_q is a positive constant for admissible systems.
    Rational f_q_constant() const {
        auto it = dets.find(q);
        if (it == dets.end()) return Rational(0);
        Rational s(0);
        for (const auto& d : it->second) s += d.constant_value().abs();
        return s;
    }

    double lambda(const std::vector<double>& x, double rho) const {
        if (!(rho > 0)) throw std::domain_error("lambda: rho must be positive");
        double s = 0;
        for (const auto& [k, _] : dets) s += f(k, x) * std::pow(rho, k);
        return s;
    }

    double doubling_ratio(const std::vector<double>& x, double rho) const {
        return lambda(x, 2 * rho) / lambda(x, rho);
    }
};

/// Enumerates n-subsets of the canonical nested brackets with weight sums in
/// [n, q], keeping the nonzero determinant polynomials grouped by weight.
/// Subsets with weight above q are checked to vanish identically (forced by
/// negative homogeneity) and are not stored.
inline VolumeProfile build_profile(const SystemSpec& spec,
                                   const std::vector<LieBasisElement>& brackets) {
    VolumeProfile prof;
    prof.n = spec.n;
    prof.q = spec.q();
    const int n = spec.n;
    const int count = (int)brackets.size();
    if (count < n) return prof;

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (;;) {
        int weight = 0;
        for (int i : idx) weight += brackets[i].weight;
        std::vector<std::vector<Polynomial>> mat(n, std::vector<Polynomial>(n));
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row)
                mat[row][col] = brackets[idx[col]].field.coeffs[row];
        Polynomial det = detail::poly_det(mat);
        if (weight > prof.q) {
            if (!det.is_zero())
                throw std::logic_error("build_profile: nonzero determinant above weight q");
        } else if (!det.is_zero()) {
            if (!det.is_delta_homogeneous(prof.q - weight))
                throw std::logic_error("build_profile: determinant not homogeneous of q-k");
            prof.dets[weight].push_back(det);
        }
        // next combination
        int pos = n - 1;
        while (pos >= 0 && idx[pos] == count - n + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < n; ++i) idx[i] = idx[i - 1] + 1;
    }
    return prof;
}

inline VolumeProfile build_profile(const SystemSpec& spec) {
    return build_profile(spec, canonical_brackets(spec));
}

}  // namespace hvf
