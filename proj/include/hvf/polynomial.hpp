#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvf/rational.hpp"

namespace hvf {

struct ContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered list of variable names with positive integer delta-weights.
/// Polynomials over the same context can be combined; mixing contexts is an error.
struct VarContext {
    std::vector<std::string> names;
    std::vector<int> weights;

    std::size_t arity() const { return names.size(); }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        return std::nullopt;
    }

    bool operator==(const VarContext& o) const {
        return names == o.names && weights == o.weights;
    }
};

using VarContextPtr = std::shared_ptr<const VarContext>;

inline VarContextPtr make_context(std::vector<std::string> names, std::vector<int> weights) {
    if (names.size() != weights.size())
        throw ContextError("VarContext: names/weights size mismatch");
    for (int w : weights)
        if (w <= 0) throw ContextError("VarContext: weights must be positive");
    return std::make_shared<VarContext>(VarContext{std::move(names), std::move(weights)});
}

/// Standard base context x1..xn with weights sigma.
inline VarContextPtr x_context(const std::vector<int>& sigma) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < sigma.size(); ++i) names.push_back("x" + std::to_string(i + 1));
    return make_context(names, sigma);
}

inline bool same_context(const VarContextPtr& a, const VarContextPtr& b) {
    return a == b || (a && b && *a == *b);
}

using Exponents = std::vector<int>;

/// Exact multivariate polynomial with Rational coefficients over a weighted
/// variable context. No zero terms are stored; exponent vectors have fixed
/// arity equal to the context's variable count.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(VarContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Polynomial zero(VarContextPtr ctx) { return Polynomial(std::move(ctx)); }

    static Polynomial constant(VarContextPtr ctx, Rational c) {
        Polynomial p(std::move(ctx));
        if (!c.is_zero()) p.terms_[Exponents(p.ctx_->arity(), 0)] = std::move(c);
        return p;
    }

    static Polynomial variable(VarContextPtr ctx, std::size_t i, int power = 1) {
        if (i >= ctx->arity()) throw ContextError("Polynomial: variable index out of range");
        Polynomial p(std::move(ctx));
        Exponents e(p.ctx_->arity(), 0);
        e[i] = power;
        p.terms_[std::move(e)] = Rational(1);
        return p;
    }

    static Polynomial monomial(VarContextPtr ctx, Exponents e, Rational c) {
        if (e.size() != ctx->arity()) throw ContextError("Polynomial: exponent arity mismatch");
        Polynomial p(std::move(ctx));
        if (!c.is_zero()) p.terms_[std::move(e)] = std::move(c);
        return p;
    }

    const VarContextPtr& context() const { return ctx_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 &&
               std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                           [](int e) { return e == 0; });
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("Polynomial: not a constant");
        return terms_.begin()->second;
    }

    int delta_degree_of(const Exponents& e) const {
        int d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * ctx_->weights[i];
        return d;
    }

    /// Largest delta-degree among the stored monomials (0 for the zero polynomial).
    int delta_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, delta_degree_of(e));
        return d;
    }

    Polynomial operator-() const {
        Polynomial r(ctx_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        check_same(o);
        Polynomial r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const {
        check_same(o);
        Polynomial r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        check_same(o);
        Polynomial r(ctx_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) {
                Exponents e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(std::move(e), ca * cb);
            }
        return r;
    }

    Polynomial scale(const Rational& c) const {
        Polynomial r(ctx_);
        if (c.is_zero()) return r;
        for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) { *this = *this + o; return *this; }
    Polynomial& operator-=(const Polynomial& o) { *this = *this - o; return *this; }
    Polynomial& operator*=(const Polynomial& o) { *this = *this * o; return *this; }

    bool operator==(const Polynomial& o) const {
        return same_context(ctx_, o.ctx_) && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(int k) const {
        if (k < 0) throw std::domain_error("Polynomial: negative power");
        Polynomial r = constant(ctx_, Rational(1));
        Polynomial b = *this;
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    Polynomial partial_derivative(std::size_t var) const {
        if (var >= ctx_->arity()) throw ContextError("partial_derivative: unknown variable");
        Polynomial r(ctx_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents d = e;
            d[var] -= 1;
            r.add_term(std::move(d), c * Rational(e[var]));
        }
        return r;
    }

    template <typename Scalar>
    Scalar evaluate(const std::vector<Scalar>& point) const {
        if (point.size() != ctx_->arity())
            throw ContextError("evaluate: point arity mismatch");
        // Powers are cached per variable up to the max exponent in use.
        std::vector<std::vector<Scalar>> powers(ctx_->arity());
        for (std::size_t i = 0; i < powers.size(); ++i) powers[i].push_back(Scalar(1));
        Scalar acc(0);
        for (const auto& [e, c] : terms_) {
            Scalar t = scalar_of<Scalar>(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                auto& pw = powers[i];
                while ((int)pw.size() <= e[i]) pw.push_back(pw.back() * point[i]);
                if (e[i] > 0) t = t * pw[e[i]];
            }
            acc = acc + t;
        }
        return acc;
    }

    /// Substitutes images[i] for variable i; the result lives in the images'
    /// context. Exact composition.
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (images.size() != ctx_->arity())
            throw ContextError("substitute: wrong number of images");
        VarContextPtr target = images.empty() ? ctx_ : images.front().context();
        for (const auto& im : images)
            if (!same_context(im.context(), target))
                throw ContextError("substitute: images in mixed contexts");
        Polynomial acc = Polynomial::zero(target);
        for (const auto& [e, c] : terms_) {
            Polynomial t = Polynomial::constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) t = t * images[i].pow(e[i]);
            acc += t;
        }
        return acc;
    }

    /// Splits into delta-homogeneous components, sorted by degree.
    std::vector<std::pair<int, Polynomial>> delta_decompose() const {
        std::map<int, Polynomial> parts;
        for (const auto& [e, c] : terms_) {
            int d = delta_degree_of(e);
            auto it = parts.find(d);
            if (it == parts.end()) it = parts.emplace(d, Polynomial(ctx_)).first;
            it->second.terms_[e] = c;
        }
        return {parts.begin(), parts.end()};
    }

    bool is_delta_homogeneous(int degree) const {
        for (const auto& [e, c] : terms_)
            if (delta_degree_of(e) != degree) return false;
        return true;
    }

    /// Canonical rendering: terms in graded-lex order (delta-degree descending,
    /// then lexicographic on exponents), coefficients as num/den, explicit '*'.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const Exponents, Rational>*> order;
        for (const auto& t : terms_) order.push_back(&t);
        std::sort(order.begin(), order.end(), [this](auto* a, auto* b) {
            int da = delta_degree_of(a->first), db = delta_degree_of(b->first);
            if (da != db) return da > db;
            return a->first > b->first;
        });
        std::ostringstream os;
        bool first = true;
        for (auto* t : order) {
            Rational c = t->second;
            if (first) {
                if (c.sign() < 0) { os << "-"; c = -c; }
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
                if (c.sign() < 0) c = -c;
            }
            first = false;
            bool has_vars = false;
            std::ostringstream vs;
            for (std::size_t i = 0; i < t->first.size(); ++i) {
                if (t->first[i] == 0) continue;
                if (has_vars) vs << "*";
                vs << ctx_->names[i];
                if (t->first[i] > 1) vs << "^" << t->first[i];
                has_vars = true;
            }
            if (!has_vars) {
                os << c.str();
            } else if (c.is_one()) {
                os << vs.str();
            } else {
                os << c.str() << "*" << vs.str();
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
        return os << p.str();
    }

private:
    template <typename Scalar>
    static Scalar scalar_of(const Rational& c) {
        if constexpr (std::is_same_v<Scalar, Rational>) return c;
        else return Scalar(c.to_double());
    }

    void check_same(const Polynomial& o) const {
        if (!same_context(ctx_, o.ctx_))
            throw ContextError("Polynomial: mixed variable contexts");
    }

    void add_term(Exponents e, Rational c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    VarContextPtr ctx_;
    std::map<Exponents, Rational> terms_;
};

}  // namespace hvf
