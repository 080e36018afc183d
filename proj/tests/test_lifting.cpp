#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hvf/lifting.hpp"

using namespace hvf;

namespace {

SystemSpec grushin(int k) {
    std::string text = "dim = 2\nweights = [1, " + std::to_string(k + 1) +
                       "]\nfield X1 = (1, 0)\nfield X2 = (0, x1";
    if (k > 1) text += "^" + std::to_string(k);
    text += ")\n";
    return parse_system(text);
}

SystemSpec chain(int n) {
    std::string text = "dim = " + std::to_string(n) + "\nweights = [";
    for (int i = 1; i <= n; ++i) text += (i > 1 ? ", " : "") + std::to_string(i);
    text += "]\nfield X1 = (1";
    for (int i = 1; i < n; ++i) text += ", 0";
    text += ")\nfield X2 = (0";
    for (int i = 1; i < n; ++i) text += ", x" + std::to_string(i);
    text += ")\n";
    return parse_system(text);
}

}  // namespace

TEST_CASE("structure constants of the Grushin k=1 algebra are Heisenberg") {
    auto basis = lie_basis(grushin(1));
    auto alg = structure_constants(basis);
    REQUIRE(alg.N == 3);
    CHECK(alg.c[0][1][2] == Rational(1));  // [X1,X2] = X3
    CHECK(alg.c[1][0][2] == Rational(-1));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                if (!(i == 0 && j == 1 && k == 2) && !(i == 1 && j == 0 && k == 2))
                    CHECK(alg.c[i][j][k].is_zero());
    CHECK(jacobi_holds(alg));
}

TEST_CASE("abelian systems have vanishing structure constants") {
    auto spec = parse_system("dim = 2\nweights = [1, 1]\nfield X1 = (1, 0)\nfield X2 = (0, 1)\n");
    auto alg = structure_constants(lie_basis(spec));
    for (int i = 0; i < alg.N; ++i)
        for (int j = 0; j < alg.N; ++j)
            for (int k = 0; k < alg.N; ++k) CHECK(alg.c[i][j][k].is_zero());
}

TEST_CASE("BCH product: identity, inversion, step-2 closed form") {
    auto alg = structure_constants(lie_basis(grushin(1)));
    std::vector<Rational> a = {Rational(1, 2), Rational(-3), Rational(2, 7)};
    std::vector<Rational> b = {Rational(5), Rational(1, 3), Rational(-1)};
    std::vector<Rational> zero3(3, Rational(0));
    Rational z(0);

    auto id = bch_product(alg, a, zero3, z);
    CHECK(id == a);
    std::vector<Rational> neg;
    for (const auto& v : a) neg.push_back(-v);
    auto e = bch_product(alg, a, neg, z);
    for (const auto& v : e) CHECK(v.is_zero());

    // step-2 closed form a + b + [a,b]/2
    auto prod = bch_product(alg, a, b, z);
    auto br = bracket_coords(alg, a, b, z);
    for (int k = 0; k < 3; ++k) CHECK(prod[k] == a[k] + b[k] + br[k] * Rational(1, 2));
}

TEST_CASE("BCH associativity, exact, through step 4") {
    // rational-coordinate associativity on algebras of steps 2, 3, 4
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> v(-6, 6);
    for (int k = 1; k <= 3; ++k) {
        auto alg = structure_constants(lie_basis(grushin(k)));
        CHECK(jacobi_holds(alg));
        std::vector<Rational> a, b, c;
        for (int i = 0; i < alg.N; ++i) {
            a.push_back(Rational(v(rng), 2));
            b.push_back(Rational(v(rng), 3));
            c.push_back(Rational(v(rng), 5));
        }
        Rational z(0);
        auto lhs = bch_product(alg, bch_product(alg, a, b, z), c, z);
        auto rhs = bch_product(alg, a, bch_product(alg, b, c, z), z);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("flows terminate and match hand-solved cases") {
    auto g1 = grushin(1);
    auto basis = lie_basis(g1);
    std::vector<VectorField> fields;
    for (const auto& el : basis.elements) fields.push_back(el.field);

    // translation flow of d_{x1}
    auto f1 = flow_polynomial(fields, {Rational(1), Rational(0), Rational(0)},
                              {Rational(0), Rational(0)});
    auto tctx = f1[0].context();
    CHECK(f1[0] == Polynomial::variable(tctx, 0));
    CHECK(f1[1].is_zero());

    // Y = X1 + X2 from 0: gamma1 = t, gamma2 = t^2/2 -> (1, 1/2) at t=1
    auto f = flow_polynomial(fields, {Rational(1), Rational(1), Rational(0)},
                             {Rational(0), Rational(0)});
    CHECK(f[0].evaluate<Rational>({Rational(1)}) == Rational(1));
    CHECK(f[1].evaluate<Rational>({Rational(1)}) == Rational(1, 2));
    CHECK(f[1] == Polynomial::variable(tctx, 0).pow(2).scale(Rational(1, 2)));
}

TEST_CASE("flow group property: time-t flow of -Y undoes the flow of Y") {
    auto g1 = grushin(1);
    auto basis = lie_basis(g1);
    std::vector<VectorField> fields;
    for (const auto& el : basis.elements) fields.push_back(el.field);

    auto ctx = make_context({"z1", "z2", "t"}, {1, 2, 1});
    auto t = Polynomial::variable(ctx, 2);
    std::vector<Polynomial> coeffs = {Polynomial::constant(ctx, Rational(2, 3)),
                                      Polynomial::constant(ctx, Rational(-1)),
                                      Polynomial::constant(ctx, Rational(1, 4))};
    std::vector<Polynomial> start = {Polynomial::variable(ctx, 0),
                                     Polynomial::variable(ctx, 1)};
    auto fwd = flow_taylor(fields, coeffs, start);
    std::vector<Polynomial> mid;
    for (const auto& tc : fwd) {
        Polynomial acc = Polynomial::zero(ctx);
        for (std::size_t k = 0; k < tc.size(); ++k) acc += tc[k] * t.pow((int)k);
        mid.push_back(acc);
    }
    std::vector<Polynomial> negc;
    for (const auto& c : coeffs) negc.push_back(-c);
    auto back = flow_taylor(fields, negc, mid);
    for (std::size_t j = 0; j < 2; ++j) {
        Polynomial acc = Polynomial::zero(ctx);
        for (std::size_t k = 0; k < back[j].size(); ++k) acc += back[j][k] * t.pow((int)k);
        CHECK(acc == start[j]);
    }
}

TEST_CASE("Folland projection for Grushin k=1") {
    auto alg = structure_constants(lie_basis(grushin(1)));
    auto Pi = folland_projection(alg);
    auto actx = Pi[0].context();
    REQUIRE(actx->arity() == 3);
    // Pi(a) = (a1, a1 a2 / 2 + a3)
    auto a1 = Polynomial::variable(actx, 0);
    auto a2 = Polynomial::variable(actx, 1);
    auto a3 = Polynomial::variable(actx, 2);
    CHECK(Pi[0] == a1);
    CHECK(Pi[1] == (a1 * a2).scale(Rational(1, 2)) + a3);

    // Pi(e1) -> (1, 0); Pi(0) = 0
    CHECK(Pi[0].evaluate<Rational>({Rational(1), Rational(0), Rational(0)}) == Rational(1));
    CHECK(Pi[1].evaluate<Rational>({Rational(1), Rational(0), Rational(0)}) == Rational(0));
    CHECK(Pi[1].evaluate<Rational>({Rational(0), Rational(0), Rational(0)}) == Rational(0));

    // Jacobian of Pi at 0 has rank n = 2
    std::vector<std::map<std::size_t, Rational>> rows;
    std::vector<Rational> zero3 = {Rational(0), Rational(0), Rational(0)};
    for (int r = 0; r < 2; ++r) {
        std::map<std::size_t, Rational> row;
        for (std::size_t i = 0; i < 3; ++i) {
            Rational d = Pi[r].partial_derivative(i).evaluate<Rational>(zero3);
            if (!d.is_zero()) row[i] = d;
        }
        rows.push_back(row);
    }
    CHECK(rational_rank(rows) == 2);
}

TEST_CASE("Grushin k=1 lift is the Heisenberg group of the paper") {
    auto L = build_lift(grushin(1));
    CHECK(L.N == 3);
    CHECK(L.p == 1);
    CHECK(L.tau == std::vector<int>{1});
    CHECK(L.Q == 4);
    CHECK(L.lift_indices == std::vector<std::size_t>{1});

    // (x1,x2,xi) * (x1p,x2p,xip) = (x1+x1p, x2+x2p+x1*xip, xi+xip)
    auto& c2 = L.z2ctx;
    auto v = [&](int i) { return Polynomial::variable(c2, i); };
    CHECK(L.product[0] == v(0) + v(3));
    CHECK(L.product[1] == v(1) + v(4) + v(0) * v(5));
    CHECK(L.product[2] == v(2) + v(5));

    // lifted fields: X~1 = d_x1, X~2 = x1 d_x2 + d_xi
    CHECK(L.lifted[0].coeffs[0].constant_value() == Rational(1));
    CHECK(L.lifted[0].coeffs[1].is_zero());
    CHECK(L.lifted[0].coeffs[2].is_zero());
    CHECK(L.lifted[1].coeffs[0].is_zero());
    CHECK(L.lifted[1].coeffs[1] == Polynomial::variable(L.zctx, 0));
    CHECK(L.lifted[1].coeffs[2].constant_value() == Rational(1));

    auto rep = verify_lift(L);
    CHECK(rep.associative);
    CHECK(rep.dilation_compatible);
    CHECK(rep.left_translation_unimodular);
    CHECK(rep.theta_projects_to_y);
    CHECK(rep.stefanoid);
    CHECK(rep.phi_jacobian_unimodular);

    // Phi for the Heisenberg lift is exactly -zeta
    auto phi = phi_change_of_variable(L);
    REQUIRE(phi.phi.size() == 1);
    CHECK(phi.phi[0] == -Polynomial::variable(phi.ctx, 4));
}

TEST_CASE("higher Grushin and chain lifts pass all exact group checks") {
    for (auto spec : {grushin(2), grushin(3), chain(3)}) {
        auto L = build_lift(spec);
        CHECK(L.Q > L.q);
        auto rep = verify_lift(L);
        CHECK(rep.associative);
        CHECK(rep.dilation_compatible);
        CHECK(rep.left_translation_unimodular);
        CHECK(rep.theta_projects_to_y);
        CHECK(rep.stefanoid);
        CHECK(rep.phi_jacobian_unimodular);
    }
}

TEST_CASE("trivial lift of an abelian system") {
    auto spec = parse_system("dim = 2\nweights = [1, 1]\nfield X1 = (1, 0)\nfield X2 = (0, 1)\n");
    auto L = build_lift(spec);
    CHECK(L.p == 0);
    CHECK(L.Q == 2);
    auto a = L.star({1.0, 2.0}, {3.0, 4.0});
    CHECK(a[0] == doctest::Approx(4.0));
    CHECK(a[1] == doctest::Approx(6.0));
}

TEST_CASE("numeric group evaluation round-trips") {
    auto L = build_lift(grushin(1));
    std::vector<double> z = {0.3, -1.2, 2.0};
    auto zi = L.inv(z);
    auto e = L.star(z, zi);
    for (double c : e) CHECK(c == doctest::Approx(0.0).epsilon(1e-14));
    // paper's law, numerically
    auto w = L.star({1.0, 2.0, 3.0}, {10.0, 20.0, 30.0});
    CHECK(w[0] == doctest::Approx(11.0));
    CHECK(w[1] == doctest::Approx(2.0 + 20.0 + 1.0 * 30.0));
    CHECK(w[2] == doctest::Approx(33.0));
}

TEST_CASE("drift lift is homogeneous of degree 2") {
    auto spec = parse_system("dim = 2\nweights = [1, 3]\nfield X1 = (1, 0)\ndrift = (0, x1)\n");
    auto L = build_lift(spec);
    REQUIRE(L.lifted_drift.has_value());
    CHECK(is_delta_homogeneous(*L.lifted_drift, 2));
    auto rep = verify_lift(L);
    CHECK(rep.associative);
    CHECK(rep.stefanoid);
}
