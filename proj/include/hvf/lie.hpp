#pragma once

#include <map>
#include <string>
#include <vector>

#include "hvf/linalg.hpp"
#include "hvf/system.hpp"
#include "hvf/vector_field.hpp"

namespace hvf {

/// Multi-index over field indices; 0 denotes the drift. The weight counts
/// drift entries twice (p_0 = 2, p_i = 1 otherwise).
struct MultiIndex {
    std::vector<int> entries;

    int length() const { return (int)entries.size(); }
    int weight() const {
        int w = 0;
        for (int e : entries) w += (e == 0) ? 2 : 1;
        return w;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries.size(); ++i)
            s += (i ? "," : "") + std::to_string(entries[i]);
        return s + ")";
    }

    bool operator==(const MultiIndex& o) const { return entries == o.entries; }
};

inline const VectorField& field_by_index(const SystemSpec& spec, int i) {
    if (i == 0) {
        if (!spec.drift) throw std::out_of_range("multi-index refers to absent drift");
        return *spec.drift;
    }
    if (i < 1 || i > spec.m()) throw std::out_of_range("invalid field index in multi-index");
    return spec.fields[i - 1];
}

/// Left-nested commutator X_[I] = [[[X_{i1},X_{i2}],X_{i3}],...,X_{ik}].
inline VectorField nested_bracket(const SystemSpec& spec, const MultiIndex& I) {
    if (I.entries.empty()) throw std::invalid_argument("nested_bracket: empty multi-index");
    VectorField acc = field_by_index(spec, I.entries[0]);
    for (std::size_t k = 1; k < I.entries.size(); ++k)
        acc = lie_bracket(acc, field_by_index(spec, I.entries[k]));
    return acc;
}

struct LieBasisElement {
    MultiIndex index;
    VectorField field;
    int weight = 0;
};

/// Basis of Lie(X) made of left-nested brackets, with the structural counts
/// N = dim Lie(X), nilpotency step, q = sum sigma_j and p = N - n.
struct LieBasis {
    std::vector<LieBasisElement> elements;
    int N = 0;
    int step = 0;
    int q = 0;
    int p = 0;
};

namespace detail {

using FieldKey = std::pair<std::size_t, Exponents>;

inline std::map<FieldKey, Rational> field_vector(const VectorField& f) {
    std::map<FieldKey, Rational> v;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        for (const auto& [e, c] : f.coeffs[i].terms()) v[{i, e}] = c;
    return v;
}

}  // namespace detail

/// All nonzero left-nested brackets up to delta-weight sigma_n, deduplicated
/// up to sign (first representative in breadth-first order wins). This is the
/// enumeration behind the ball-volume profile.
inline std::vector<LieBasisElement> canonical_brackets(const SystemSpec& spec) {
    const int max_weight = spec.sigma.back();
    std::vector<LieBasisElement> out;
    // frontier of the previous length, including duplicates-by-sign is not
    // needed: brackets of a dedup'd representative cover brackets of its
    // negatives up to sign.
    std::vector<LieBasisElement> frontier;
    std::vector<int> indices;
    for (int i = 1; i <= spec.m(); ++i) indices.push_back(i);
    if (spec.drift) indices.push_back(0);

    auto seen = [&out](const VectorField& f) {
        for (const auto& el : out)
            if (el.field == f || el.field == -f) return true;
        return false;
    };

    for (int i : indices) {
        MultiIndex I{{i}};
        VectorField f = field_by_index(spec, i);
        if (f.is_zero() || seen(f)) continue;
        out.push_back({I, f, I.weight()});
        frontier.push_back(out.back());
    }
    while (!frontier.empty()) {
        std::vector<LieBasisElement> next;
        for (const auto& el : frontier) {
            for (int i : indices) {
                MultiIndex I = el.index;
                I.entries.push_back(i);
                if (I.weight() > max_weight) continue;
                VectorField f = lie_bracket(el.field, field_by_index(spec, i));
                if (f.is_zero() || seen(f)) continue;
                out.push_back({I, f, I.weight()});
                next.push_back(out.back());
            }
        }
        frontier = std::move(next);
    }
    return out;
}

/// Breadth-first closure of left-nested brackets up to weight sigma_n with
/// exact Gaussian elimination over Q; nilpotency of step sigma_n guarantees
/// termination.
inline LieBasis lie_basis(const SystemSpec& spec) {
    const int max_weight = spec.sigma.back();
    LieBasis basis;
    RationalSpan<detail::FieldKey> span;
    std::vector<LieBasisElement> frontier;
    std::vector<int> indices;
    for (int i = 1; i <= spec.m(); ++i) indices.push_back(i);
    if (spec.drift) indices.push_back(0);

    for (int i : indices) {
        MultiIndex I{{i}};
        VectorField f = field_by_index(spec, i);
        LieBasisElement el{I, f, I.weight()};
        frontier.push_back(el);
        if (!f.is_zero() && span.add(detail::field_vector(f))) basis.elements.push_back(el);
    }
    // Brackets of *all* nested brackets (not only the independent ones) are
    // needed for the closure; left-nested brackets span Lie(X).
    while (!frontier.empty()) {
        std::vector<LieBasisElement> next;
        for (const auto& el : frontier) {
            if (el.field.is_zero()) continue;
            for (int i : indices) {
                MultiIndex I = el.index;
                I.entries.push_back(i);
                if (I.weight() > max_weight) continue;
                VectorField f = lie_bracket(el.field, field_by_index(spec, i));
                if (f.is_zero()) continue;
                LieBasisElement child{I, f, I.weight()};
                next.push_back(child);
                if (span.add(detail::field_vector(f))) basis.elements.push_back(child);
            }
        }
        frontier = std::move(next);
    }
    basis.N = (int)basis.elements.size();
    basis.q = spec.q();
    basis.p = basis.N - spec.n;
    for (const auto& el : basis.elements) basis.step = std::max(basis.step, el.weight);
    return basis;
}

/// Rank over Q of {Y(point) : Y in basis}; with (H.2) at 0 this equals n at
/// every point by homogeneity.
inline int hormander_rank(const LieBasis& basis, const std::vector<Rational>& point) {
    std::vector<std::map<std::size_t, Rational>> vecs;
    for (const auto& el : basis.elements) {
        std::map<std::size_t, Rational> v;
        auto vals = el.field.evaluate<Rational>(point);
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (!vals[i].is_zero()) v[i] = vals[i];
        vecs.push_back(std::move(v));
    }
    return (int)rational_rank(vecs);
}

}  // namespace hvf
