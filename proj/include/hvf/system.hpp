#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hvf/linalg.hpp"
#include "hvf/polynomial.hpp"
#include "hvf/vector_field.hpp"

namespace hvf {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) +
                             ": " + msg),
          line(l), column(c) {}
};

/// A homogeneous vector-field system: dimension n, weights sigma_1<=...<=sigma_n
/// with sigma_1=1, fields X_1..X_m (declared degree-1 homogeneous) and an
/// optional degree-2 drift X_0.
struct SystemSpec {
    int n = 0;
    std::vector<int> sigma;
    std::vector<std::string> field_names;
    std::vector<VectorField> fields;
    std::optional<VectorField> drift;
    VarContextPtr ctx;

    int m() const { return (int)fields.size(); }
    int q() const {
        int s = 0;
        for (int w : sigma) s += w;
        return s;
    }
};

namespace detail {

// Recursive-descent parser for polynomial expressions over x1..xn with
// + - * ^, parentheses and rational literals p/q.
class ExprParser {
public:
    ExprParser(const std::string& s, int line, int col0, VarContextPtr ctx)
        : s_(s), line_(line), col0_(col0), ctx_(std::move(ctx)) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    Polynomial expr() {
        skip_ws();
        bool neg = false;
        while (peek() == '+' || peek() == '-') {
            if (get() == '-') neg = !neg;
            skip_ws();
        }
        Polynomial p = term();
        if (neg) p = -p;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                get();
                skip_ws();
                Polynomial t = term();
                p = (c == '+') ? p + t : p - t;
            } else {
                return p;
            }
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                get();
                skip_ws();
                p = p * factor();
            } else {
                return p;
            }
        }
    }

    Polynomial factor() {
        Polynomial p = atom();
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            if (pos_ == start) fail("expected integer exponent after '^'");
            p = p.pow(std::stoi(s_.substr(start, pos_ - start)));
        }
        return p;
    }

    Polynomial atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            get();
            Polynomial p = expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            get();
            return p;
        }
        if (c == '-') {
            get();
            return -factor();
        }
        if (std::isdigit((unsigned char)c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            std::string num = s_.substr(start, pos_ - start);
            if (peek() == '/') {
                get();
                std::size_t dstart = pos_;
                while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
                if (pos_ == dstart) fail("expected denominator digits");
                num += "/" + s_.substr(dstart, pos_ - dstart);
            }
            return Polynomial::constant(ctx_, Rational::parse(num));
        }
        if (std::isalpha((unsigned char)c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto idx = ctx_->index_of(name);
            if (!idx) fail("unknown variable '" + name + "'", (int)start);
            return Polynomial::variable(ctx_, *idx);
        }
        fail(c == '\0' ? "unexpected end of expression"
                       : std::string("unexpected character '") + c + "'");
        return Polynomial();  // unreachable
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, (int)pos_); }
    [[noreturn]] void fail(const std::string& msg, int at) const {
        throw ParseError(line_, col0_ + at + 1, msg);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_;
    int col0_;
    VarContextPtr ctx_;
};

inline std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Splits a "(e1, e2, ...)" tuple at top-level commas.
inline std::vector<std::pair<std::string, int>> split_tuple(const std::string& s, int line,
                                                            int col0) {
    std::string t = strip(s);
    if (t.empty() || t.front() != '(' || t.back() != ')')
        throw ParseError(line, col0 + 1, "expected parenthesized tuple (...)");
    std::vector<std::pair<std::string, int>> parts;
    int depth = 0;
    std::size_t start = 1;
    for (std::size_t i = 1; i + 1 <= t.size(); ++i) {
        if (i == t.size() - 1 || (t[i] == ',' && depth == 0)) {
            parts.emplace_back(t.substr(start, i - start), col0 + (int)start);
            start = i + 1;
        } else if (t[i] == '(') {
            ++depth;
        } else if (t[i] == ')') {
            --depth;
        }
    }
    return parts;
}

}  // namespace detail

/// Parses a .hvf system description. Line-oriented grammar, '#' comments:
///   dim = <int>
///   weights = [<int>, ...]
///   field <name> = (<poly>, ..., <poly>)
///   drift = (<poly>, ..., <poly>)        (optional)
inline SystemSpec parse_system(const std::string& text) {
    SystemSpec spec;
    bool have_dim = false, have_weights = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = detail::strip(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, 1, "expected '='");
        std::string key = detail::strip(line.substr(0, eq));
        std::string value = detail::strip(line.substr(eq + 1));
        int vcol = (int)(raw.find('=') + 1);

        if (key == "dim") {
            if (have_dim) throw ParseError(lineno, 1, "duplicate 'dim'");
            try {
                spec.n = std::stoi(value);
            } catch (...) {
                throw ParseError(lineno, vcol + 1, "dim must be an integer");
            }
            if (spec.n < 1) throw ParseError(lineno, vcol + 1, "dim must be >= 1");
            have_dim = true;
        } else if (key == "weights") {
            if (!have_dim) throw ParseError(lineno, 1, "'weights' before 'dim'");
            if (have_weights) throw ParseError(lineno, 1, "duplicate 'weights'");
            std::string v = value;
            if (v.empty() || v.front() != '[' || v.back() != ']')
                throw ParseError(lineno, vcol + 1, "weights must be [w1, ...]");
            std::istringstream ws(v.substr(1, v.size() - 2));
            std::string tok;
            while (std::getline(ws, tok, ',')) {
                tok = detail::strip(tok);
                try {
                    std::size_t used = 0;
                    int w = std::stoi(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument("trail");
                    spec.sigma.push_back(w);
                } catch (...) {
                    throw ParseError(lineno, vcol + 1, "weights must be integers");
                }
            }
            if ((int)spec.sigma.size() != spec.n)
                throw ParseError(lineno, vcol + 1, "expected " + std::to_string(spec.n) +
                                                       " weights");
            if (spec.sigma.front() != 1)
                throw ParseError(lineno, vcol + 1, "weights must start with sigma_1 = 1");
            for (std::size_t i = 1; i < spec.sigma.size(); ++i)
                if (spec.sigma[i] < spec.sigma[i - 1])
                    throw ParseError(lineno, vcol + 1,
                                     "weights must be nondecreasing with sigma_1 = 1");
            spec.ctx = x_context(spec.sigma);
            have_weights = true;
        } else if (key.rfind("field", 0) == 0 || key == "drift") {
            if (!have_weights) throw ParseError(lineno, 1, "'" + key + "' before 'weights'");
            std::string name;
            if (key != "drift") {
                name = detail::strip(key.substr(5));
                if (name.empty()) throw ParseError(lineno, 1, "field needs a name");
            }
            auto parts = detail::split_tuple(value, lineno, vcol);
            if ((int)parts.size() != spec.n)
                throw ParseError(lineno, vcol + 1,
                                 "expected " + std::to_string(spec.n) + " components");
            std::vector<Polynomial> coeffs;
            for (const auto& [expr, col] : parts)
                coeffs.push_back(detail::ExprParser(expr, lineno, col, spec.ctx).parse());
            if (key == "drift") {
                if (spec.drift) throw ParseError(lineno, 1, "duplicate 'drift'");
                spec.drift = VectorField(std::move(coeffs));
            } else {
                spec.field_names.push_back(name);
                spec.fields.emplace_back(std::move(coeffs));
            }
        } else {
            throw ParseError(lineno, 1, "unknown section '" + key + "'");
        }
    }
    if (!have_dim) throw ParseError(lineno, 1, "missing 'dim'");
    if (!have_weights) throw ParseError(lineno, 1, "missing 'weights'");
    if (spec.fields.empty()) throw ParseError(lineno, 1, "missing 'field' sections");
    return spec;
}

/// Canonical rendering; parse(print(spec)) == spec.
inline std::string print_system(const SystemSpec& spec) {
    std::ostringstream os;
    os << "dim = " << spec.n << "\n";
    os << "weights = [";
    for (int i = 0; i < spec.n; ++i) os << (i ? ", " : "") << spec.sigma[i];
    os << "]\n";
    for (std::size_t k = 0; k < spec.fields.size(); ++k) {
        os << "field " << spec.field_names[k] << " = (";
        for (int i = 0; i < spec.n; ++i)
            os << (i ? ", " : "") << spec.fields[k].coeffs[i].str();
        os << ")\n";
    }
    if (spec.drift) {
        os << "drift = (";
        for (int i = 0; i < spec.n; ++i) os << (i ? ", " : "") << spec.drift->coeffs[i].str();
        os << ")\n";
    }
    return os.str();
}

struct HomogeneityReport {
    bool ok = true;
    std::vector<std::optional<int>> field_degrees;  // per X_i; expected 1
    std::optional<int> drift_degree;                // expected 2
    bool independent = true;                        // X_1..X_m over Q
    std::vector<std::string> violations;
};

/// Structural (per-monomial) homogeneity check: X_i must be degree 1, the
/// drift degree 2, and X_1..X_m linearly independent over Q.
inline HomogeneityReport validate_homogeneity(const SystemSpec& spec) {
    HomogeneityReport rep;
    for (std::size_t i = 0; i < spec.fields.size(); ++i) {
        auto d = delta_degree_of_field(spec.fields[i]);
        bool ok = is_delta_homogeneous(spec.fields[i], 1) && !spec.fields[i].is_zero();
        rep.field_degrees.push_back(d);
        if (!ok) {
            rep.ok = false;
            rep.violations.push_back("field " + spec.field_names[i] +
                                     " is not delta-homogeneous of degree 1");
        }
    }
    if (spec.drift) {
        rep.drift_degree = delta_degree_of_field(*spec.drift);
        if (!is_delta_homogeneous(*spec.drift, 2) || spec.drift->is_zero()) {
            rep.ok = false;
            rep.violations.push_back("drift is not delta-homogeneous of degree 2");
        }
    }
    // Independence of the fields as vectors of polynomials.
    using Key = std::pair<std::size_t, Exponents>;
    std::vector<std::map<Key, Rational>> vecs;
    for (const auto& f : spec.fields) {
        std::map<Key, Rational> v;
        for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            for (const auto& [e, c] : f.coeffs[i].terms()) v[{i, e}] = c;
        vecs.push_back(std::move(v));
    }
    if (rational_rank(vecs) != vecs.size()) {
        rep.independent = false;
        rep.ok = false;
        rep.violations.push_back("fields X_1..X_m are linearly dependent over Q");
    }
    return rep;
}

}  // namespace hvf
