#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hvf/rational.hpp"

using hvf::Rational;

TEST_CASE("construction reduces to lowest terms") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));   // denominator kept positive
    CHECK(Rational(0, 7) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("parse and print round-trip") {
    CHECK(Rational::parse("3/2").str() == "3/2");
    CHECK(Rational::parse("-6/4").str() == "-3/2");
    CHECK(Rational::parse("5").str() == "5");
    CHECK(Rational::parse("340282366920938463463374607431768211456").to_double() ==
          doctest::Approx(3.402823669e38));
    CHECK_THROWS(Rational::parse("x"));
}

TEST_CASE("field axioms on random values vs __int128 oracle") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 1000);
    for (int i = 0; i < 500; ++i) {
        long an = num(rng), ad = den(rng), bn = num(rng), bd = den(rng);
        Rational a(an, ad), b(bn, bd);
        // cross-multiplied sum as the oracle
        CHECK(a + b == Rational(an * bd + bn * ad, ad * bd));
        CHECK(a * b == Rational(an * bn, ad * bd));
        CHECK((a + b) - b == a);
        CHECK((a * b).to_double() == doctest::Approx(a.to_double() * b.to_double()));
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(a + b == b + a);
        CHECK((a + b) * (a - b) == a * a - b * b);
    }
}

TEST_CASE("ordering and sign") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK(Rational(-3, 7).sign() == -1);
    CHECK(Rational(-3, 7).abs() == Rational(3, 7));
    CHECK(Rational(5, 3).inv() == Rational(3, 5));
}
