#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hvf/system.hpp"

using namespace hvf;

static const char* kGrushin1 = R"(# Grushin plane, k = 1
dim = 2
weights = [1, 2]
field X1 = (1, 0)
field X2 = (0, x1)
)";

TEST_CASE("parse the Grushin k=1 system") {
    auto spec = parse_system(kGrushin1);
    CHECK(spec.n == 2);
    CHECK(spec.m() == 2);
    CHECK(spec.sigma == std::vector<int>{1, 2});
    CHECK(spec.q() == 3);
    CHECK(spec.fields[0].coeffs[0].constant_value() == Rational(1));
    CHECK(spec.fields[1].coeffs[1] == Polynomial::variable(spec.ctx, 0));
    CHECK(!spec.drift);
}

TEST_CASE("parse the section-5 style chain system") {
    auto spec = parse_system(
        "dim = 3\n"
        "weights = [1, 2, 3]\n"
        "field X1 = (1, 0, 0)\n"
        "field X2 = (0, x1, x2)\n");
    CHECK(spec.n == 3);
    CHECK(spec.m() == 2);
    auto rep = validate_homogeneity(spec);
    CHECK(rep.ok);
}

TEST_CASE("weights must be nondecreasing with sigma_1 = 1") {
    CHECK_THROWS_AS(parse_system("dim = 2\nweights = [2, 1]\nfield X1 = (1, 0)\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_system("dim = 2\nweights = [1, 2, 3]\nfield X1 = (1, 0)\n"),
                    ParseError);
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_system("dim = 2\nweights = [1, 2]\nfield X1 = (1, x9)\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column > 12);
        CHECK(std::string(e.what()).find("unknown variable") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_system("weights = [1]\n"), ParseError);       // weights before dim
    CHECK_THROWS_AS(parse_system("dim = 2\nweights = [1, 2]\n"), ParseError);  // no fields
    CHECK_THROWS_AS(parse_system("dim = 1\nweights = [1/2]\nfield X1 = (1)\n"), ParseError);
}

TEST_CASE("rational literals and expressions") {
    auto spec = parse_system(
        "dim = 2\n"
        "weights = [1, 2]\n"
        "field X1 = (1/2, (x1 + x1)^2 - 4*x1^2)\n"
        "field X2 = (0, 3/2*x1)\n");
    CHECK(spec.fields[0].coeffs[0].constant_value() == Rational(1, 2));
    CHECK(spec.fields[0].coeffs[1].is_zero());
    CHECK(spec.fields[1].coeffs[1] == Polynomial::variable(spec.ctx, 0).scale(Rational(3, 2)));
}

TEST_CASE("print/parse round-trip on canonical specs") {
    for (const char* text : {kGrushin1,
                             "dim = 2\nweights = [1, 3]\nfield X1 = (1, 0)\n"
                             "field X2 = (0, x1^2)\ndrift = (0, x1)\n"}) {
        auto spec = parse_system(text);
        auto printed = print_system(spec);
        auto spec2 = parse_system(printed);
        CHECK(print_system(spec2) == printed);
        CHECK(spec2.n == spec.n);
        CHECK(spec2.sigma == spec.sigma);
        for (int i = 0; i < spec.m(); ++i) CHECK(spec2.fields[i] == spec.fields[i]);
        CHECK(spec2.drift.has_value() == spec.drift.has_value());
        if (spec.drift) CHECK(*spec2.drift == *spec.drift);
    }
}

TEST_CASE("homogeneity validation accepts the paper families") {
    // Grushin k = 1..3
    for (int k = 1; k <= 3; ++k) {
        std::string text = "dim = 2\nweights = [1, " + std::to_string(k + 1) +
                           "]\nfield X1 = (1, 0)\nfield X2 = (0, x1";
        if (k > 1) text += "^" + std::to_string(k);
        text += ")\n";
        auto rep = validate_homogeneity(parse_system(text));
        CHECK(rep.ok);
        CHECK(rep.field_degrees[0] == 1);
        CHECK(rep.field_degrees[1] == 1);
    }
    // drift family: X0 = x1^k d2 with weights [1, k+2]
    for (int k = 1; k <= 2; ++k) {
        std::string text = "dim = 2\nweights = [1, " + std::to_string(k + 2) +
                           "]\nfield X1 = (1, 0)\ndrift = (0, x1";
        if (k > 1) text += "^" + std::to_string(k);
        text += ")\n";
        auto rep = validate_homogeneity(parse_system(text));
        CHECK(rep.ok);
        CHECK(rep.drift_degree == 2);
    }
}

TEST_CASE("homogeneity violations are reported, not thrown") {
    // X = (x2, 0) with weights [1,2]: coefficient delta-degree 2 != sigma_1 - 1
    auto spec = parse_system("dim = 2\nweights = [1, 2]\nfield X1 = (x2, 0)\n");
    auto rep = validate_homogeneity(spec);
    CHECK(!rep.ok);
    CHECK(rep.field_degrees[0] == -1);
    CHECK(!rep.violations.empty());

    // linearly dependent fields
    auto dep = parse_system(
        "dim = 2\nweights = [1, 2]\n"
        "field X1 = (1, 0)\nfield X2 = (2, 0)\n");
    auto rep2 = validate_homogeneity(dep);
    CHECK(!rep2.independent);
    CHECK(!rep2.ok);
}

TEST_CASE("homogeneity accepts the remaining paper families") {
    // chained fields, the Engel-type system and the x1-powers comb
    for (const char* text :
         {"dim = 3\nweights = [1, 2, 3]\nfield X1 = (1, 0, 0)\nfield X2 = (0, x1, x2)\n",
          "dim = 3\nweights = [1, 2, 3]\nfield X1 = (1, 0, 0)\nfield X2 = (0, x1, x1^2)\n",
          "dim = 4\nweights = [1, 2, 3, 4]\nfield X1 = (1, 0, 0, 0)\n"
          "field X2 = (0, x1, x1^2, x1^3)\n",
          "dim = 3\nweights = [1, 3, 5]\nfield X1 = (1, 0, 0)\ndrift = (0, x1, x2)\n"}) {
        auto rep = validate_homogeneity(parse_system(text));
        CHECK(rep.ok);
    }
}
