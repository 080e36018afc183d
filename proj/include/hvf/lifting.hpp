#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hvf/lie.hpp"
#include "hvf/linalg.hpp"
#include "hvf/volume.hpp"

namespace hvf {

/// Lie(X) with a fixed nested-bracket basis E = {V_1..V_N} and exact structure
/// constants [V_i, V_j] = sum_k c[i][j][k] V_k.
struct NilpotentAlgebra {
    int N = 0;
    int step = 0;
    std::vector<LieBasisElement> basis;
    std::vector<std::vector<std::vector<Rational>>> c;
};

/// Expands every bracket of basis elements in the basis by exact linear solve.
/// Fails if the basis is not closed (which would indicate a lie_basis bug).
inline NilpotentAlgebra structure_constants(const LieBasis& basis) {
    NilpotentAlgebra alg;
    alg.N = basis.N;
    alg.step = basis.step;
    alg.basis = basis.elements;
    RationalSpan<detail::FieldKey> span;
    for (const auto& el : basis.elements)
        if (!span.add(detail::field_vector(el.field)))
            throw std::logic_error("structure_constants: basis not independent");
    alg.c.assign(alg.N, std::vector<std::vector<Rational>>(
                            alg.N, std::vector<Rational>(alg.N, Rational(0))));
    for (int i = 0; i < alg.N; ++i)
        for (int j = i + 1; j < alg.N; ++j) {
            VectorField b = lie_bracket(basis.elements[i].field, basis.elements[j].field);
            if (b.is_zero()) continue;
            auto coeffs = span.express(detail::field_vector(b));
            if (!coeffs)
                throw std::logic_error("structure_constants: bracket outside basis span");
            for (int k = 0; k < alg.N; ++k) {
                alg.c[i][j][k] = (*coeffs)[k];
                alg.c[j][i][k] = -(*coeffs)[k];
            }
        }
    return alg;
}

/// Jacobi identity on the structure constants (test hook; exact).
inline bool jacobi_holds(const NilpotentAlgebra& alg) {
    const int N = alg.N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    Rational s(0);
                    for (int r = 0; r < N; ++r)
                        s += alg.c[i][j][r] * alg.c[r][k][l] +
                             alg.c[j][k][r] * alg.c[r][i][l] +
                             alg.c[k][i][r] * alg.c[r][j][l];
                    if (!s.is_zero()) return false;
                }
    return true;
}

struct BchTerm {
    std::vector<int> word;  // 0 = first argument, 1 = second
    Rational coeff;
};

/// Dynkin-series terms for log(e^A e^B), truncated at the nilpotency step.
/// Words longer than the step have weight above the step and vanish; the
/// supported range is capped at 6.
inline const std::vector<BchTerm>& bch_terms(int step) {
    if (step < 1 || step > 6)
        throw std::domain_error("bch_terms: nilpotency step must be in [1,6]");
    static std::map<int, std::vector<BchTerm>> cache;
    auto it = cache.find(step);
    if (it != cache.end()) return it->second;

    std::vector<BchTerm> terms;
    std::vector<long> fact = {1, 1, 2, 6, 24, 120, 720};
    // sequences of blocks (p_i, q_i), p_i+q_i >= 1, total letters <= step
    std::vector<std::pair<int, int>> blocks;
    auto emit = [&](auto&& self) -> void {
        if (!blocks.empty()) {
            int L = 0;
            long denom_fact = 1;
            for (auto [p, q] : blocks) {
                L += p + q;
                denom_fact *= fact[p] * fact[q];
            }
            int k = (int)blocks.size();
            // Zero brackets are dropped at evaluation; skip the cheap syntactic
            // zeros here (innermost [Z,Z]).
            auto& last = blocks.back();
            bool syntactic_zero =
                (last.second >= 2) || (last.second == 0 && last.first >= 2);
            if (!syntactic_zero) {
                BchTerm t;
                for (auto [p, q] : blocks) {
                    for (int a = 0; a < p; ++a) t.word.push_back(0);
                    for (int b = 0; b < q; ++b) t.word.push_back(1);
                }
                Rational sign = (k % 2 == 1) ? Rational(1) : Rational(-1);
                t.coeff = sign / Rational((long)k * L * denom_fact);
                terms.push_back(std::move(t));
            }
        }
        int used = 0;
        for (auto [p, q] : blocks) used += p + q;
        if (used >= step) return;
        for (int total = 1; total + used <= step; ++total)
            for (int p = 0; p <= total; ++p) {
                blocks.push_back({p, total - p});
                self(self);
                blocks.pop_back();
            }
    };
    emit(emit);
    return cache.emplace(step, std::move(terms)).first->second;
}

namespace detail {

inline Rational scal_mul(const Rational& s, const Rational& c) { return s * c; }
inline Polynomial scal_mul(const Polynomial& s, const Rational& c) { return s.scale(c); }

}  // namespace detail

/// Bilinear bracket on E-coordinates: [u, v]_k = sum_ij u_i v_j c_ij^k.
/// Scalar is Rational or Polynomial.
template <typename Scalar>
std::vector<Scalar> bracket_coords(const NilpotentAlgebra& alg,
                                   const std::vector<Scalar>& u,
                                   const std::vector<Scalar>& v, const Scalar& zero) {
    std::vector<Scalar> out(alg.N, zero);
    for (int i = 0; i < alg.N; ++i)
        for (int j = 0; j < alg.N; ++j) {
            for (int k = 0; k < alg.N; ++k) {
                const Rational& c = alg.c[i][j][k];
                if (c.is_zero()) continue;
                out[k] = out[k] + detail::scal_mul(u[i] * v[j], c);
            }
        }
    return out;
}

/// a . b through the truncated Dynkin expansion, exact. (R^N, .) is a Lie
/// group with inversion a -> -a.
template <typename Scalar>
std::vector<Scalar> bch_product(const NilpotentAlgebra& alg, const std::vector<Scalar>& a,
                                const std::vector<Scalar>& b, const Scalar& zero) {
    std::vector<Scalar> acc(alg.N, zero);
    for (const auto& term : bch_terms(alg.step)) {
        const auto& w = term.word;
        std::vector<Scalar> cur = (w.back() == 0) ? a : b;
        bool dead = false;
        for (int i = (int)w.size() - 2; i >= 0; --i) {
            cur = bracket_coords(alg, w[i] == 0 ? a : b, cur, zero);
            // early exit on identically-zero intermediate values
            dead = true;
            for (const auto& s : cur)
                if (!(s == zero)) { dead = false; break; }
            if (dead) break;
        }
        if (dead) continue;
        for (int k = 0; k < alg.N; ++k)
            acc[k] = acc[k] + detail::scal_mul(cur[k], term.coeff);
    }
    return acc;
}

namespace detail {

inline Polynomial embed(const Polynomial& p, const VarContextPtr& target,
                        std::size_t offset) {
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < p.context()->arity(); ++i)
        images.push_back(Polynomial::variable(target, offset + i));
    return p.substitute(images);
}

}  // namespace detail

/// Taylor coefficients of the flow of Y = sum_i coeffs[i] * fields[i] started
/// at `start`; coordinate j of the flow is sum_k T[j][k] t^k. Graded
/// nilpotency terminates the series: Y applied sigma_j + 1 times to x_j is 0.
inline std::vector<std::vector<Polynomial>> flow_taylor(
    const std::vector<VectorField>& fields, const std::vector<Polynomial>& coeffs,
    const std::vector<Polynomial>& start) {
    if (fields.empty() || fields.size() != coeffs.size())
        throw std::invalid_argument("flow_taylor: fields/coeffs mismatch");
    const VarContextPtr& xctx = fields[0].context();
    const VarContextPtr& cctx = coeffs[0].context();
    const std::size_t n = xctx->arity();
    if (start.size() != n) throw std::invalid_argument("flow_taylor: start arity");

    // product context: C-variables first, then the x-variables
    std::vector<std::string> names = cctx->names;
    std::vector<int> weights = cctx->weights;
    for (std::size_t j = 0; j < n; ++j) {
        names.push_back("__flow_" + xctx->names[j]);
        weights.push_back(xctx->weights[j]);
    }
    auto pctx = make_context(names, weights);
    const std::size_t off = cctx->arity();

    std::vector<Polynomial> W(n, Polynomial::zero(pctx));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        Polynomial ci = detail::embed(coeffs[i], pctx, 0);
        for (std::size_t j = 0; j < n; ++j)
            W[j] += ci * detail::embed(fields[i].coeffs[j], pctx, off);
    }

    int max_sigma = *std::max_element(xctx->weights.begin(), xctx->weights.end());
    std::vector<Polynomial> cur;
    for (std::size_t j = 0; j < n; ++j) cur.push_back(Polynomial::variable(pctx, off + j));

    // images mapping the product context back to C with x -> start
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < off; ++i) images.push_back(Polynomial::variable(cctx, i));
    for (std::size_t j = 0; j < n; ++j) images.push_back(start[j]);

    std::vector<std::vector<Polynomial>> taylor(n);
    for (int k = 0;; ++k) {
        bool all_zero = true;
        for (std::size_t j = 0; j < n; ++j) {
            taylor[j].push_back(cur[j].substitute(images));
            if (!cur[j].is_zero()) all_zero = false;
        }
        if (all_zero) break;
        if (k > max_sigma + 1)
            throw std::logic_error("flow_taylor: series failed to terminate (homogeneity)");
        std::vector<Polynomial> nxt;
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial d = Polynomial::zero(pctx);
            for (std::size_t i = 0; i < n; ++i)
                d += W[i] * cur[j].partial_derivative(off + i);
            nxt.push_back(d.scale(Rational(1, k + 1)));
        }
        cur = std::move(nxt);
    }
    return taylor;
}

/// Flow coordinates as polynomials in a single time variable t (exact).
inline std::vector<Polynomial> flow_polynomial(const std::vector<VectorField>& fields,
                                               const std::vector<Rational>& coeffs,
                                               const std::vector<Rational>& start) {
    auto tctx = make_context({"t"}, {1});
    std::vector<Polynomial> c, s;
    for (const auto& v : coeffs) c.push_back(Polynomial::constant(tctx, v));
    for (const auto& v : start) s.push_back(Polynomial::constant(tctx, v));
    auto taylor = flow_taylor(fields, c, s);
    auto t = Polynomial::variable(tctx, 0);
    std::vector<Polynomial> out;
    for (const auto& coeffs_j : taylor) {
        Polynomial acc = Polynomial::zero(tctx);
        for (std::size_t k = 0; k < coeffs_j.size(); ++k) acc += coeffs_j[k] * t.pow((int)k);
        out.push_back(acc);
    }
    return out;
}

/// Folland projection Pi(a) = flow of a.X at time 1 from 0, as n exact
/// polynomials over the graded a-context.
inline std::vector<Polynomial> folland_projection(const NilpotentAlgebra& alg) {
    std::vector<std::string> names;
    std::vector<int> weights;
    for (int i = 0; i < alg.N; ++i) {
        names.push_back("a" + std::to_string(i + 1));
        weights.push_back(alg.basis[i].weight);
    }
    auto actx = make_context(names, weights);
    std::vector<VectorField> fields;
    std::vector<Polynomial> coeffs;
    for (int i = 0; i < alg.N; ++i) {
        fields.push_back(alg.basis[i].field);
        coeffs.push_back(Polynomial::variable(actx, i));
    }
    const std::size_t n = alg.basis[0].field.dim();
    std::vector<Polynomial> start(n, Polynomial::zero(actx));
    auto taylor = flow_taylor(fields, coeffs, start);
    std::vector<Polynomial> out;
    for (const auto& coeffs_j : taylor) {
        Polynomial acc = Polynomial::zero(actx);
        for (const auto& c : coeffs_j) acc += c;
        out.push_back(acc);
    }
    return out;
}

/// The lifted Carnot group (R^N, *, D_lambda) with lifted fields
/// Xt_i(x, xi) = X_i(x) + R_i(x, xi).
struct LiftedSystem {
    SystemSpec base;
    LieBasis lie;
    NilpotentAlgebra alg;
    int n = 0, p = 0, N = 0;
    int q = 0, Q = 0;
    std::vector<int> tau;
    std::vector<std::size_t> lift_indices;  // 0-based positions into the basis

    VarContextPtr actx;   // a1..aN, graded by bracket weight
    VarContextPtr zctx;   // x1..xn, xi1..xip
    VarContextPtr z2ctx;  // z-variables then primed copies

    std::vector<Polynomial> Pi;        // over actx
    std::vector<Polynomial> T;         // over actx
    std::vector<Polynomial> Tinv;      // over zctx
    std::vector<Polynomial> product;   // over z2ctx
    std::vector<Polynomial> inverse;   // over zctx
    std::vector<VectorField> lifted;   // X~_1..X~_m over zctx
    std::optional<VectorField> lifted_drift;

    std::vector<double> star(const std::vector<double>& a,
                             const std::vector<double>& b) const {
        std::vector<double> pt = a;
        pt.insert(pt.end(), b.begin(), b.end());
        std::vector<double> out;
        for (const auto& f : product) out.push_back(f.evaluate<double>(pt));
        return out;
    }

    std::vector<double> inv(const std::vector<double>& z) const {
        std::vector<double> out;
        for (const auto& f : inverse) out.push_back(f.evaluate<double>(z));
        return out;
    }

    /// D_lambda(x, xi): base coordinates scale by sigma, lifted by tau.
    std::vector<double> dilate(const std::vector<double>& z, double lambda) const {
        std::vector<double> out = z;
        for (int i = 0; i < n; ++i) out[i] *= std::pow(lambda, base.sigma[i]);
        for (int k = 0; k < p; ++k) out[n + k] *= std::pow(lambda, tau[k]);
        return out;
    }

    /// Symbolic group product: u, v are N-vectors of polynomials over a common
    /// context; the result substitutes them into the group-law polynomials.
    std::vector<Polynomial> star_sym(const std::vector<Polynomial>& u,
                                     const std::vector<Polynomial>& v) const {
        std::vector<Polynomial> images = u;
        images.insert(images.end(), v.begin(), v.end());
        std::vector<Polynomial> out;
        for (const auto& f : product) out.push_back(f.substitute(images));
        return out;
    }

    std::vector<Polynomial> inv_sym(const std::vector<Polynomial>& u) const {
        std::vector<Polynomial> out;
        for (const auto& f : inverse) out.push_back(f.substitute(u));
        return out;
    }
};

namespace detail {

inline Rational linear_coeff(const Polynomial& poly, std::size_t var) {
    for (const auto& [e, c] : poly.terms()) {
        bool linear = true;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i == var ? e[i] != 1 : e[i] != 0) {
                linear = false;
                break;
            }
        }
        if (linear) return c;
    }
    return Rational(0);
}

}  // namespace detail

/// Builds the Folland lift: selects lifted coordinates so that
/// T(a) = (Pi(a), a_{j_1}, ..., a_{j_p}) is invertible at 0 (lexicographically
/// smallest choice), inverts T by degree-graded substitution, and produces the
/// group law, inversion, dilations and lifted fields. The construction is
/// verified on the spot: T o T^{-1} = id, identity/inversion axioms, and the
/// lifting shape of the X~_i.
inline LiftedSystem build_lift(const SystemSpec& spec) {
    LiftedSystem L;
    L.base = spec;
    L.lie = lie_basis(spec);
    L.alg = structure_constants(L.lie);
    L.n = spec.n;
    L.N = L.lie.N;
    L.p = L.N - L.n;
    L.q = spec.q();
    if (L.p < 0) throw std::runtime_error("build_lift: dim Lie(X) below n");
    if (L.alg.step > 6) throw std::runtime_error("build_lift: step above 6 unsupported");

    L.Pi = folland_projection(L.alg);
    L.actx = L.Pi[0].context();

    // Linear part of Pi at 0 (n x N over Q).
    std::vector<std::vector<Rational>> lin(L.n, std::vector<Rational>(L.N, Rational(0)));
    for (int r = 0; r < L.n; ++r)
        for (int i = 0; i < L.N; ++i) lin[r][i] = detail::linear_coeff(L.Pi[r], i);

    // Lexicographically smallest lifted-index set with invertible Jacobian:
    // equivalent to the n x n minor of lin on the complement being nonzero.
    std::vector<std::size_t> pick((std::size_t)L.p);
    bool found = false;
    std::vector<std::size_t> comb(L.p);
    auto try_comb = [&](const std::vector<std::size_t>& J) {
        std::vector<bool> in_J(L.N, false);
        for (auto j : J) in_J[j] = true;
        std::vector<std::vector<Rational>> minor;
        for (int r = 0; r < L.n; ++r) {
            std::vector<Rational> row;
            for (int i = 0; i < L.N; ++i)
                if (!in_J[i]) row.push_back(lin[r][i]);
            minor.push_back(std::move(row));
        }
        return !dense_det(minor).is_zero();
    };
    if (L.p == 0) {
        found = try_comb({});
    } else {
        for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = i;
        for (;;) {
            if (try_comb(comb)) {
                pick = comb;
                found = true;
                break;
            }
            int pos = L.p - 1;
            while (pos >= 0 && comb[pos] == (std::size_t)(L.N - L.p + pos)) --pos;
            if (pos < 0) break;
            ++comb[pos];
            for (int i = pos + 1; i < L.p; ++i) comb[i] = comb[i - 1] + 1;
        }
    }
    if (!found)
        throw std::runtime_error(
            "build_lift: no index choice yields an invertible Jacobian (inconsistent "
            "with the lifting existence claim)");
    L.lift_indices = pick;
    for (auto j : pick) L.tau.push_back(L.alg.basis[j].weight);
    L.Q = L.q;
    for (int t : L.tau) L.Q += t;

    // z-context and T
    {
        std::vector<std::string> names;
        std::vector<int> weights;
        for (int i = 0; i < L.n; ++i) {
            names.push_back(spec.ctx->names[i]);
            weights.push_back(spec.sigma[i]);
        }
        for (int k = 0; k < L.p; ++k) {
            names.push_back("xi" + std::to_string(k + 1));
            weights.push_back(L.tau[k]);
        }
        L.zctx = make_context(names, weights);
    }
    L.T = L.Pi;
    for (auto j : pick) L.T.push_back(Polynomial::variable(L.actx, j));

    // target weight of each T coordinate
    std::vector<int> target_weight;
    for (int i = 0; i < L.n; ++i) target_weight.push_back(spec.sigma[i]);
    for (int t : L.tau) target_weight.push_back(t);

    // Graded inversion: solve for the a's in increasing weight; at weight w
    // the system is linear in the weight-w a's, with lower-weight solutions
    // substituted into the nonlinear part.
    {
        std::vector<Polynomial> sol(L.N, Polynomial::zero(L.zctx));
        std::vector<bool> solved(L.N, false);
        std::vector<int> avail_weights;
        for (int i = 0; i < L.N; ++i) avail_weights.push_back(L.alg.basis[i].weight);
        std::vector<int> distinct = avail_weights;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (int w : distinct) {
            std::vector<int> unknowns, eqs;
            for (int i = 0; i < L.N; ++i)
                if (avail_weights[i] == w) unknowns.push_back(i);
            for (int r = 0; r < L.N; ++r)
                if (target_weight[r] == w) eqs.push_back(r);
            if (unknowns.size() != eqs.size())
                throw std::logic_error("build_lift: graded inversion block mismatch");
            std::vector<Polynomial> images;
            for (int i = 0; i < L.N; ++i)
                images.push_back(solved[i] ? sol[i] : Polynomial::zero(L.zctx));
            // rhs_r = z_r - nonlinear part evaluated at lower-weight solutions
            std::vector<Polynomial> rhs;
            for (int r : eqs)
                rhs.push_back(Polynomial::variable(L.zctx, r) - L.T[r].substitute(images));
            // linear block M[e][u] = coeff of a_{unknowns[u]} in T_{eqs[e]}
            const std::size_t b = unknowns.size();
            std::vector<std::vector<Rational>> M(b, std::vector<Rational>(b, Rational(0)));
            for (std::size_t e = 0; e < b; ++e)
                for (std::size_t u = 0; u < b; ++u)
                    M[e][u] = detail::linear_coeff(L.T[eqs[e]], unknowns[u]);
            // invert M over Q (augmented elimination)
            std::vector<std::vector<Rational>> inv(b, std::vector<Rational>(b, Rational(0)));
            for (std::size_t i = 0; i < b; ++i) inv[i][i] = Rational(1);
            for (std::size_t col = 0; col < b; ++col) {
                std::size_t piv = col;
                while (piv < b && M[piv][col].is_zero()) ++piv;
                if (piv == b) throw std::logic_error("build_lift: singular graded block");
                std::swap(M[piv], M[col]);
                std::swap(inv[piv], inv[col]);
                Rational f = M[col][col].inv();
                for (std::size_t j = 0; j < b; ++j) {
                    M[col][j] *= f;
                    inv[col][j] *= f;
                }
                for (std::size_t i = 0; i < b; ++i) {
                    if (i == col || M[i][col].is_zero()) continue;
                    Rational g = M[i][col];
                    for (std::size_t j = 0; j < b; ++j) {
                        M[i][j] -= g * M[col][j];
                        inv[i][j] -= g * inv[col][j];
                    }
                }
            }
            for (std::size_t u = 0; u < b; ++u) {
                Polynomial s = Polynomial::zero(L.zctx);
                for (std::size_t e = 0; e < b; ++e) s += rhs[e].scale(inv[u][e]);
                sol[unknowns[u]] = s;
                solved[unknowns[u]] = true;
            }
        }
        L.Tinv = sol;
    }

    // T o T^{-1} = id and T^{-1} o T = id, exactly.
    for (int r = 0; r < L.N; ++r) {
        if (L.T[r].substitute(L.Tinv) != Polynomial::variable(L.zctx, r))
            throw std::logic_error("build_lift: T o T^{-1} != id");
    }
    for (int i = 0; i < L.N; ++i) {
        if (L.Tinv[i].substitute(L.T) != Polynomial::variable(L.actx, i))
            throw std::logic_error("build_lift: T^{-1} o T != id");
    }

    // group law over the doubled context
    {
        std::vector<std::string> names = L.zctx->names;
        std::vector<int> weights = L.zctx->weights;
        for (int i = 0; i < L.N; ++i) {
            names.push_back(L.zctx->names[i] + "p");
            weights.push_back(L.zctx->weights[i]);
        }
        L.z2ctx = make_context(names, weights);
        std::vector<Polynomial> u, v;
        for (int i = 0; i < L.N; ++i) {
            std::vector<Polynomial> first, second;
            for (int j = 0; j < L.N; ++j) {
                first.push_back(Polynomial::variable(L.z2ctx, j));
                second.push_back(Polynomial::variable(L.z2ctx, L.N + j));
            }
            u.push_back(L.Tinv[i].substitute(first));
            v.push_back(L.Tinv[i].substitute(second));
        }
        auto w = bch_product<Polynomial>(L.alg, u, v, Polynomial::zero(L.z2ctx));
        for (int r = 0; r < L.N; ++r) L.product.push_back(L.T[r].substitute(w));
    }

    // inversion iota(z) = T(-T^{-1}(z))
    {
        std::vector<Polynomial> neg;
        for (const auto& s : L.Tinv) neg.push_back(-s);
        for (int r = 0; r < L.N; ++r) L.inverse.push_back(L.T[r].substitute(neg));
    }

    // identity and inversion axioms (cheap exact checks)
    {
        std::vector<Polynomial> zs, zeros;
        for (int i = 0; i < L.N; ++i) {
            zs.push_back(Polynomial::variable(L.zctx, i));
            zeros.push_back(Polynomial::zero(L.zctx));
        }
        auto right_id = L.star_sym(zs, zeros);
        auto left_id = L.star_sym(zeros, zs);
        auto inv_prod = L.star_sym(zs, L.inv_sym(zs));
        for (int r = 0; r < L.N; ++r) {
            if (right_id[r] != zs[r] || left_id[r] != zs[r])
                throw std::logic_error("build_lift: group identity axiom failed");
            if (!inv_prod[r].is_zero())
                throw std::logic_error("build_lift: inversion axiom failed");
        }
    }

    // lifted fields: X~_i(z) = d/dw (z * w)|_{w=0} . dT_0(e_i)
    {
        std::vector<std::vector<Rational>> dT0(L.N, std::vector<Rational>(L.N, Rational(0)));
        for (int r = 0; r < L.N; ++r)
            for (int i = 0; i < L.N; ++i) dT0[r][i] = detail::linear_coeff(L.T[r], i);

        std::vector<Polynomial> at_w0;
        for (int i = 0; i < L.N; ++i) at_w0.push_back(Polynomial::variable(L.zctx, i));
        for (int i = 0; i < L.N; ++i) at_w0.push_back(Polynomial::zero(L.zctx));

        std::vector<std::vector<Polynomial>> J(L.N);
        for (int r = 0; r < L.N; ++r)
            for (int j = 0; j < L.N; ++j)
                J[r].push_back(
                    L.product[r].partial_derivative(L.N + j).substitute(at_w0));

        auto lift_one = [&](int basis_pos) {
            std::vector<Polynomial> coeffs(L.N, Polynomial::zero(L.zctx));
            for (int r = 0; r < L.N; ++r)
                for (int j = 0; j < L.N; ++j)
                    if (!dT0[j][basis_pos].is_zero())
                        coeffs[r] += J[r][j].scale(dT0[j][basis_pos]);
            return VectorField(std::move(coeffs));
        };
        for (int i = 0; i < spec.m(); ++i) L.lifted.push_back(lift_one(i));
        if (spec.drift) L.lifted_drift = lift_one(spec.m());

        // lifting shape: the first n coefficients project onto X_i, the
        // remaining ones act only on xi with alpha_{i,j} independent of xi_j.
        for (int i = 0; i < spec.m(); ++i) {
            for (int r = 0; r < L.n; ++r) {
                Polynomial expect = detail::embed(spec.fields[i].coeffs[r], L.zctx, 0);
                if (L.lifted[i].coeffs[r] != expect)
                    throw std::logic_error("build_lift: lifted field does not project");
            }
            for (int k = 0; k < L.p; ++k)
                if (!L.lifted[i].coeffs[L.n + k].partial_derivative(L.n + k).is_zero())
                    throw std::logic_error("build_lift: alpha_{i,j} depends on xi_j");
            if (!is_delta_homogeneous(L.lifted[i], 1))
                throw std::logic_error("build_lift: lifted field not homogeneous of 1");
        }
        if (L.lifted_drift && !is_delta_homogeneous(*L.lifted_drift, 2))
            throw std::logic_error("build_lift: lifted drift not homogeneous of 2");
    }

    return L;
}

/// The change of variable of the mixed-derivative representation:
/// Phi_{x,y}(zeta) = xi-projection of (x,0) * (x,zeta)^{-1} * (y,0), together
/// with theta. Contexts: (x_1..x_n, y_1..y_n, zeta_1..zeta_p).
struct PhiMap {
    VarContextPtr ctx;
    std::vector<Polynomial> theta;  // N components
    std::vector<Polynomial> phi;    // p components
};

inline PhiMap phi_change_of_variable(const LiftedSystem& L) {
    PhiMap out;
    std::vector<std::string> names;
    std::vector<int> weights;
    for (int i = 0; i < L.n; ++i) {
        names.push_back("x" + std::to_string(i + 1));
        weights.push_back(L.base.sigma[i]);
    }
    for (int i = 0; i < L.n; ++i) {
        names.push_back("y" + std::to_string(i + 1));
        weights.push_back(L.base.sigma[i]);
    }
    for (int k = 0; k < L.p; ++k) {
        names.push_back("zeta" + std::to_string(k + 1));
        weights.push_back(L.tau[k]);
    }
    out.ctx = make_context(names, weights);

    auto var = [&](int i) { return Polynomial::variable(out.ctx, i); };
    std::vector<Polynomial> x0, xz, y0;
    for (int i = 0; i < L.n; ++i) x0.push_back(var(i));
    for (int k = 0; k < L.p; ++k) x0.push_back(Polynomial::zero(out.ctx));
    for (int i = 0; i < L.n; ++i) xz.push_back(var(i));
    for (int k = 0; k < L.p; ++k) xz.push_back(var(2 * L.n + k));
    for (int i = 0; i < L.n; ++i) y0.push_back(var(L.n + i));
    for (int k = 0; k < L.p; ++k) y0.push_back(Polynomial::zero(out.ctx));

    // substitute group-law polynomials symbolically
    auto star = [&](const std::vector<Polynomial>& u, const std::vector<Polynomial>& v) {
        std::vector<Polynomial> images = u;
        images.insert(images.end(), v.begin(), v.end());
        std::vector<Polynomial> r;
        for (const auto& f : L.product) r.push_back(f.substitute(images));
        return r;
    };
    auto inv = [&](const std::vector<Polynomial>& u) {
        std::vector<Polynomial> r;
        for (const auto& f : L.inverse) r.push_back(f.substitute(u));
        return r;
    };

    out.theta = star(star(x0, inv(xz)), y0);
    for (int k = 0; k < L.p; ++k) out.phi.push_back(out.theta[L.n + k]);
    return out;
}

struct LiftCheckReport {
    bool associative = false;
    bool dilation_compatible = false;
    bool left_translation_unimodular = false;
    bool theta_projects_to_y = false;
    bool stefanoid = false;
    bool phi_jacobian_unimodular = false;
};

/// Heavy exact identities: associativity, D_lambda-compatibility, |det| = 1 of
/// left translations, and the properties of Phi_{x,y}.
inline LiftCheckReport verify_lift(const LiftedSystem& L) {
    LiftCheckReport rep;

    // associativity over a tripled context
    {
        std::vector<std::string> names = L.zctx->names;
        std::vector<int> weights = L.zctx->weights;
        for (int copy = 1; copy <= 2; ++copy)
            for (int i = 0; i < L.N; ++i) {
                names.push_back(L.zctx->names[i] + std::string(copy, 'p'));
                weights.push_back(L.zctx->weights[i]);
            }
        auto c3 = make_context(names, weights);
        std::vector<Polynomial> a, b, c;
        for (int i = 0; i < L.N; ++i) {
            a.push_back(Polynomial::variable(c3, i));
            b.push_back(Polynomial::variable(c3, L.N + i));
            c.push_back(Polynomial::variable(c3, 2 * L.N + i));
        }
        auto star = [&](const std::vector<Polynomial>& u, const std::vector<Polynomial>& v) {
            std::vector<Polynomial> images = u;
            images.insert(images.end(), v.begin(), v.end());
            std::vector<Polynomial> r;
            for (const auto& f : L.product) r.push_back(f.substitute(images));
            return r;
        };
        auto lhs = star(star(a, b), c);
        auto rhs = star(a, star(b, c));
        rep.associative = (lhs == rhs);
    }

    // D_lambda(z * z') = D_lambda(z) * D_lambda(z') with lambda a fresh variable
    {
        std::vector<std::string> names = L.z2ctx->names;
        std::vector<int> weights = L.z2ctx->weights;
        names.push_back("lam");
        weights.push_back(1);
        auto cl = make_context(names, weights);
        auto lam = Polynomial::variable(cl, 2 * L.N);
        std::vector<Polynomial> z, zp, dz, dzp;
        for (int i = 0; i < L.N; ++i) {
            auto zi = Polynomial::variable(cl, i);
            auto zpi = Polynomial::variable(cl, L.N + i);
            z.push_back(zi);
            zp.push_back(zpi);
            dz.push_back(zi * lam.pow(L.zctx->weights[i]));
            dzp.push_back(zpi * lam.pow(L.zctx->weights[i]));
        }
        auto star = [&](const std::vector<Polynomial>& u, const std::vector<Polynomial>& v) {
            std::vector<Polynomial> images = u;
            images.insert(images.end(), v.begin(), v.end());
            std::vector<Polynomial> r;
            for (const auto& f : L.product) r.push_back(f.substitute(images));
            return r;
        };
        auto lhs = star(dz, dzp);
        auto prod = star(z, zp);
        bool ok = true;
        for (int i = 0; i < L.N; ++i)
            if (lhs[i] != prod[i] * lam.pow(L.zctx->weights[i])) ok = false;
        rep.dilation_compatible = ok;
    }

    // |det d(left translation)| = 1: the Jacobian of w -> z*w has constant
    // determinant +-1 (unimodularity under Lebesgue measure).
    {
        std::vector<std::vector<Polynomial>> jac(L.N);
        for (int r = 0; r < L.N; ++r)
            for (int j = 0; j < L.N; ++j)
                jac[r].push_back(L.product[r].partial_derivative(L.N + j));
        Polynomial det = detail::poly_det(jac);
        rep.left_translation_unimodular =
            det.is_constant() && det.constant_value().abs() == Rational(1);
    }

    // Phi_{x,y}: theta's first n components are y, the stefanoid identity, and
    // the zeta-Jacobian is +-1.
    {
        auto phi = phi_change_of_variable(L);
        bool proj = true;
        for (int i = 0; i < L.n; ++i)
            if (phi.theta[i] != Polynomial::variable(phi.ctx, L.n + i)) proj = false;
        rep.theta_projects_to_y = proj;

        auto var = [&](int i) { return Polynomial::variable(phi.ctx, i); };
        std::vector<Polynomial> x0, xz, y_phi, y0;
        for (int i = 0; i < L.n; ++i) x0.push_back(var(i));
        for (int k = 0; k < L.p; ++k) x0.push_back(Polynomial::zero(phi.ctx));
        for (int i = 0; i < L.n; ++i) xz.push_back(var(i));
        for (int k = 0; k < L.p; ++k) xz.push_back(var(2 * L.n + k));
        for (int i = 0; i < L.n; ++i) y_phi.push_back(var(L.n + i));
        for (int k = 0; k < L.p; ++k) y_phi.push_back(phi.phi[k]);
        for (int i = 0; i < L.n; ++i) y0.push_back(var(L.n + i));
        for (int k = 0; k < L.p; ++k) y0.push_back(Polynomial::zero(phi.ctx));

        auto star = [&](const std::vector<Polynomial>& u, const std::vector<Polynomial>& v) {
            std::vector<Polynomial> images = u;
            images.insert(images.end(), v.begin(), v.end());
            std::vector<Polynomial> r;
            for (const auto& f : L.product) r.push_back(f.substitute(images));
            return r;
        };
        auto inv = [&](const std::vector<Polynomial>& u) {
            std::vector<Polynomial> r;
            for (const auto& f : L.inverse) r.push_back(f.substitute(u));
            return r;
        };
        auto lhs = star(inv(x0), y_phi);   // (x,0)^{-1} * (y, Phi(zeta))
        auto rhs = star(inv(xz), y0);      // (x,zeta)^{-1} * (y, 0)
        rep.stefanoid = (lhs == rhs);

        if (L.p == 0) {
            rep.phi_jacobian_unimodular = true;
        } else {
            std::vector<std::vector<Polynomial>> jac(L.p);
            for (int k = 0; k < L.p; ++k)
                for (int l = 0; l < L.p; ++l)
                    jac[k].push_back(phi.phi[k].partial_derivative(2 * L.n + l));
            Polynomial det = detail::poly_det(jac);
            rep.phi_jacobian_unimodular =
                det.is_constant() && det.constant_value().abs() == Rational(1);
        }
    }
    return rep;
}

}  // namespace hvf
