#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hvf/polynomial.hpp"

using namespace hvf;

namespace {

Polynomial random_poly(const VarContextPtr& ctx, std::mt19937_64& rng, int max_terms = 5,
                       int max_exp = 3) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> expd(0, max_exp);
    std::uniform_int_distribution<long> coef(-9, 9);
    Polynomial p = Polynomial::zero(ctx);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        Exponents e(ctx->arity());
        for (auto& ei : e) ei = expd(rng);
        p += Polynomial::monomial(ctx, e, Rational(coef(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("basic arithmetic examples") {
    auto ctx = x_context({1, 2});
    auto x1 = Polynomial::variable(ctx, 0);
    auto x2 = Polynomial::variable(ctx, 1);

    CHECK((x1 * x1).str() == "x1^2");
    CHECK(((x1 + x2) + (-x2)) == x1);
    CHECK((x1 * x1).scale(Rational(3, 2)).str() == "3/2*x1^2");

    auto other = x_context({1, 1});
    CHECK_THROWS_AS(x1 + Polynomial::variable(other, 0), ContextError);
}

TEST_CASE("partial derivatives") {
    auto ctx = x_context({1, 2});
    auto x1 = Polynomial::variable(ctx, 0);
    auto x2 = Polynomial::variable(ctx, 1);

    CHECK((x1 * x1).partial_derivative(0) == x1.scale(Rational(2)));
    CHECK((x1 * x2).partial_derivative(1) == x1);
    CHECK(Polynomial::constant(ctx, Rational(5)).partial_derivative(0).is_zero());
    CHECK_THROWS_AS(x1.partial_derivative(7), ContextError);
}

TEST_CASE("evaluation, exact and double") {
    auto ctx = x_context({1, 2});
    auto x1 = Polynomial::variable(ctx, 0);
    auto x2 = Polynomial::variable(ctx, 1);

    auto p = x1 * x1 * x2;  // x1^2 x2
    CHECK(p.evaluate<Rational>({Rational(2), Rational(3)}) == Rational(12));
    CHECK(Polynomial::zero(ctx).evaluate<Rational>({Rational(7), Rational(1)}) == Rational(0));
    auto q = (x1 + x2) * (x1 + x2);
    CHECK(q.evaluate<Rational>({Rational(1), Rational(-1)}) == Rational(0));
    CHECK(p.evaluate<double>({2.0, 3.0}) == doctest::Approx(12.0));
    CHECK_THROWS_AS(p.evaluate<double>({1.0}), ContextError);
}

TEST_CASE("delta decomposition by weighted degree") {
    auto ctx = x_context({1, 2});
    auto x1 = Polynomial::variable(ctx, 0);
    auto x2 = Polynomial::variable(ctx, 1);

    auto parts = (x1 + x2).delta_decompose();
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == 1);
    CHECK(parts[0].second == x1);
    CHECK(parts[1].first == 2);
    CHECK(parts[1].second == x2);

    auto sq = (x1 * x1).delta_decompose();
    REQUIRE(sq.size() == 1);
    CHECK(sq[0].first == 2);

    // x1*x2 + x1^3 is a single component of delta-degree 3
    auto mix = (x1 * x2 + x1.pow(3)).delta_decompose();
    REQUIRE(mix.size() == 1);
    CHECK(mix[0].first == 3);
    CHECK(mix[0].second == x1 * x2 + x1.pow(3));
}

TEST_CASE("components scale exactly under the dilation substitution") {
    // component(delta_lambda x) == lambda^deg * component(x), verified as an
    // exact polynomial identity in (x, lambda).
    std::mt19937_64 rng(7);
    auto ctx = x_context({1, 2, 3});
    auto ext = make_context({"x1", "x2", "x3", "lam"}, {1, 2, 3, 1});
    std::vector<Polynomial> dil;
    for (int i = 0; i < 3; ++i) {
        auto xi = Polynomial::variable(ext, i);
        auto lam = Polynomial::variable(ext, 3);
        dil.push_back(xi * lam.pow(ctx->weights[i]));
    }
    std::vector<Polynomial> id_images;
    for (int i = 0; i < 3; ++i) id_images.push_back(Polynomial::variable(ext, i));
    auto lam = Polynomial::variable(ext, 3);

    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_poly(ctx, rng);
        for (const auto& [deg, comp] : p.delta_decompose()) {
            auto scaled = comp.substitute(dil);
            auto expect = comp.substitute(id_images) * lam.pow(deg);
            CHECK(scaled == expect);
        }
    }
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 rng(99);
    auto ctx = x_context({1, 1, 2});
    for (int trial = 0; trial < 25; ++trial) {
        auto a = random_poly(ctx, rng);
        auto b = random_poly(ctx, rng);
        auto c = random_poly(ctx, rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);

        // evaluate is a ring homomorphism on rational points
        std::vector<Rational> pt = {Rational(2, 3), Rational(-1, 2), Rational(5)};
        CHECK((a * b).evaluate<Rational>(pt) ==
              a.evaluate<Rational>(pt) * b.evaluate<Rational>(pt));
        CHECK((a + b).evaluate<Rational>(pt) ==
              a.evaluate<Rational>(pt) + b.evaluate<Rational>(pt));
    }
}

TEST_CASE("canonical printing") {
    auto ctx = x_context({1, 2});
    auto x1 = Polynomial::variable(ctx, 0);
    auto x2 = Polynomial::variable(ctx, 1);
    auto p = x2 + x1 * x1 * x2.scale(Rational(-3, 2)) + Polynomial::constant(ctx, Rational(1));
    CHECK(p.str() == "-3/2*x1^2*x2 + x2 + 1");
    CHECK(Polynomial::zero(ctx).str() == "0");
}
