#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hvf/rational.hpp"

namespace hvf {

/// Incremental exact row space over Q with representation tracking, used for
/// independence tests and for expanding vectors in a chosen basis. Keys only
/// need a total order; vectors are sparse maps.
template <typename Key>
class RationalSpan {
public:
    std::size_t rank() const { return rows_.size(); }

    /// Inserts v. Returns true when v was independent of the current span.
    bool add(const std::map<Key, Rational>& v) {
        auto [r, combo] = reduce(v);
        if (r.empty()) return false;
        // r = v - sum_j combo[j] orig_j. Normalize on the smallest remaining
        // key, store row = r/lead = sum_j A_new[j] orig_j with
        // A_new = (-combo/lead, ..., 1/lead), then keep RREF by eliminating
        // the new pivot from existing rows.
        const Key pivot = r.begin()->first;
        const Rational lead = r.begin()->second;
        for (auto& [k, c] : r) c /= lead;
        for (auto& c : combo) c = -c / lead;
        combo.push_back(lead.inv());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            auto it = rows_[i].find(pivot);
            if (it == rows_[i].end()) continue;
            Rational f = it->second;
            axpy(rows_[i], r, -f);
            while (combos_[i].size() < combo.size()) combos_[i].push_back(Rational(0));
            for (std::size_t j = 0; j < combo.size(); ++j)
                combos_[i][j] -= f * combo[j];
        }
        rows_.push_back(std::move(r));
        combos_.push_back(std::move(combo));
        pivots_.push_back(pivot);
        return true;
    }

    /// Coefficients expressing v over the independent vectors added so far
    /// (in insertion order), or nullopt if v is outside the span.
    std::optional<std::vector<Rational>> express(const std::map<Key, Rational>& v) const {
        auto [r, combo] = reduce(v);
        if (!r.empty()) return std::nullopt;
        std::vector<Rational> out(rows_.size(), Rational(0));
        for (std::size_t j = 0; j < combo.size(); ++j) out[j] = combo[j];
        return out;
    }

    bool contains(const std::map<Key, Rational>& v) const {
        return reduce(v).first.empty();
    }

private:
    static void axpy(std::map<Key, Rational>& dst, const std::map<Key, Rational>& src,
                     const Rational& f) {
        if (f.is_zero()) return;
        for (const auto& [k, c] : src) {
            auto it = dst.find(k);
            if (it == dst.end()) {
                Rational nc = f * c;
                if (!nc.is_zero()) dst.emplace(k, std::move(nc));
            } else {
                it->second += f * c;
                if (it->second.is_zero()) dst.erase(it);
            }
        }
    }

    std::pair<std::map<Key, Rational>, std::vector<Rational>> reduce(
        std::map<Key, Rational> r) const {
        std::vector<Rational> combo(rows_.size(), Rational(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            auto it = r.find(pivots_[i]);
            if (it == r.end()) continue;
            Rational f = it->second;  // rows are pivot-normalized to 1
            axpy(r, rows_[i], -f);
            for (std::size_t j = 0; j < combos_[i].size(); ++j)
                combo[j] += f * combos_[i][j];
        }
        return {std::move(r), std::move(combo)};
    }

    std::vector<std::map<Key, Rational>> rows_;
    std::vector<std::vector<Rational>> combos_;
    std::vector<Key> pivots_;
};

/// Exact rank of a list of sparse vectors.
template <typename Key>
std::size_t rational_rank(const std::vector<std::map<Key, Rational>>& vecs) {
    RationalSpan<Key> span;
    for (const auto& v : vecs) span.add(v);
    return span.rank();
}

/// Solves the dense square system A c = b over Q. A is column-major
/// (A[j] = j-th column). Returns nullopt when singular.
inline std::optional<std::vector<Rational>> solve_dense(
    std::vector<std::vector<Rational>> cols, std::vector<Rational> b) {
    const std::size_t n = b.size();
    // Gaussian elimination on the augmented row-major copy.
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) m[i][j] = cols[j][i];
    for (std::size_t i = 0; i < n; ++i) m[i][n] = b[i];
    for (std::size_t col = 0, row = 0; col < n && row < n; ++col, ++row) {
        std::size_t piv = row;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[row]);
        Rational inv = m[row][col].inv();
        for (std::size_t j = col; j <= n; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || m[i][col].is_zero()) continue;
            Rational f = m[i][col];
            for (std::size_t j = col; j <= n; ++j) m[i][j] -= f * m[row][j];
        }
    }
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = m[i][n];
    return out;
}

inline Rational dense_det(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rational inv = m[col][col].inv();
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m[i][col].is_zero()) continue;
            Rational f = m[i][col] * inv;
            for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
        }
    }
    return det;
}

}  // namespace hvf
