#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hvf/gamma.hpp"

using namespace hvf;

namespace {

SystemSpec grushin1() {
    return parse_system("dim = 2\nweights = [1, 2]\nfield X1 = (1, 0)\nfield X2 = (0, x1)\n");
}

double urand(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
}

}  // namespace

TEST_CASE("only the Grushin k=1 system is accepted") {
    CHECK(GammaGrushin::is_grushin1(grushin1()));
    auto other = parse_system("dim = 2\nweights = [1, 3]\nfield X1 = (1, 0)\nfield X2 = (0, x1^2)\n");
    CHECK(!GammaGrushin::is_grushin1(other));
    CHECK_THROWS_AS(GammaGrushin{other}, UnsupportedSystem);
}

TEST_CASE("Gamma_G point values and homogeneity") {
    GammaGrushin G(grushin1());
    CHECK(G.gamma_G({1.0, 0.0, 0.0}) == doctest::Approx(1.0));        // gamma0 = 1 initially
    CHECK(G.gamma_G({0.0, 1.0, 0.0}) == doctest::Approx(0.25));       // root of 16
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> z = {urand(rng, -2, 2), urand(rng, -2, 2), urand(rng, -2, 2)};
        if (std::abs(z[0]) + std::abs(z[1]) + std::abs(z[2]) < 0.1) continue;
        double lam = urand(rng, 0.3, 2.5);
        std::vector<double> zl = {lam * z[0], lam * lam * z[1], lam * z[2]};
        CHECK(G.gamma_G(zl) == doctest::Approx(std::pow(lam, -2.0) * G.gamma_G(z))
                                   .epsilon(1e-12));  // degree 2 - Q with Q = 4
    }
}

TEST_CASE("Gamma_G is L_G-harmonic off the pole, symbolically") {
    GammaGrushin G(grushin1());
    auto f = G.gamma_G_radical();
    auto X1f = f.apply(G.lift().lifted[0]);
    auto X2f = f.apply(G.lift().lifted[1]);
    auto LG = X1f.apply(G.lift().lifted[0]);
    auto LG2 = X2f.apply(G.lift().lifted[1]);
    RadicalFunction sum(LG.base(), [&] {
        std::map<int, Polynomial> t = LG.terms();
        for (const auto& [h, P] : LG2.terms()) {
            auto it = t.find(h);
            if (it == t.end()) t.emplace(h, P);
            else it->second += P;
        }
        return t;
    }());
    CHECK(sum.is_zero_function());
}

TEST_CASE("closed form: axis reduction and the K(1/2) factor") {
    GammaGrushin G(grushin1());
    // x1 = 0: Gamma = gamma0 sqrt2 K(1/2) (y1^4 + 4 (x2-y2)^2)^{-1/4}
    std::vector<double> x = {0.0, 0.7};
    for (auto y : {std::vector<double>{0.5, 0.0}, {1.2, 3.0}, {-0.4, 0.9}}) {
        double expect = std::sqrt(2.0) * elliptic_K(0.5) *
                        std::pow(std::pow(y[0], 4) + 4 * std::pow(x[1] - y[1], 2), -0.25);
        CHECK(G.closed_form(x, y) == doctest::Approx(expect).epsilon(1e-14));
        CHECK(G.m_argument(x, y) == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(G.closed_form({0.0, 1.0}, {0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(G.closed_form({1.0, 1.0}, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("m-argument stays in the K domain on a brute scan") {
    GammaGrushin G(grushin1());
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100000; ++t) {
        std::vector<double> x = {urand(rng, -3, 3), urand(rng, -3, 3)};
        std::vector<double> y = {urand(rng, -3, 3), urand(rng, -3, 3)};
        if (x == y) continue;
        double m = G.m_argument(x, y);
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
        if (x[0] * y[0] <= 0.0) CHECK(m <= 0.5 + 1e-15);
        else CHECK(m > 0.5 - 1e-15);
    }
}

TEST_CASE("saturation quadrature agrees with the closed form") {
    GammaGrushin G(grushin1());
    std::mt19937_64 rng(23);
    // the spec's named pair plus a random grid
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs = {
        {{1.0, 0.0}, {0.0, 1.0}}};
    for (int t = 0; t < 12; ++t) {
        std::vector<double> x = {urand(rng, -2, 2), urand(rng, -2, 2)};
        std::vector<double> y = {urand(rng, -2, 2), urand(rng, -2, 2)};
        if (grushin_distance_surrogate(x, y) < 0.05) continue;
        pairs.push_back({x, y});
    }
    for (const auto& [x, y] : pairs) {
        double cf = G.closed_form(x, y);
        auto sat = G.saturation(x, y, 1e-10);
        CHECK(sat.converged);
        CHECK(std::abs(sat.value - cf) <= 1e-8 * std::abs(cf));
    }
}

TEST_CASE("saturation is symmetric and jointly homogeneous") {
    GammaGrushin G(grushin1());
    std::mt19937_64 rng(29);
    for (int t = 0; t < 8; ++t) {
        std::vector<double> x = {urand(rng, -2, 2), urand(rng, -2, 2)};
        std::vector<double> y = {urand(rng, -2, 2), urand(rng, -2, 2)};
        if (grushin_distance_surrogate(x, y) < 0.1) continue;
        double ab = G.saturation(x, y).checked("sym");
        double ba = G.saturation(y, x).checked("sym");
        CHECK(std::abs(ab - ba) <= 1e-9 * std::abs(ab));

        double lam = urand(rng, 0.5, 2.0);
        std::vector<double> xl = {lam * x[0], lam * lam * x[1]};
        std::vector<double> yl = {lam * y[0], lam * lam * y[1]};
        double scaled = G.saturation(xl, yl).checked("hom");
        CHECK(std::abs(scaled - ab / lam) <= 1e-8 * std::abs(ab / lam));  // 2 - q = -1
    }
}

TEST_CASE("derivative representation vs finite differences, r = 1") {
    GammaGrushin G(grushin1());
    std::vector<double> x = {1.0, 0.0}, y = {2.0, 0.0};
    for (int field : {1, 2}) {
        double quad = G.derivative_quadrature(x, y, {}, {field});
        double fd = G.derivative_fd(x, y, {{true, field}});
        CHECK(std::abs(quad - fd) <= 1e-4 * std::max(std::abs(quad), 1e-12));
        double quad_x = G.derivative_quadrature(x, y, {field}, {});
        double fd_x = G.derivative_fd(x, y, {{false, field}});
        CHECK(std::abs(quad_x - fd_x) <= 1e-4 * std::max(std::abs(quad_x), 1e-12));
    }
}

TEST_CASE("mixed second derivatives via the iota kernel vs nested differences") {
    GammaGrushin G(grushin1());
    std::mt19937_64 rng(37);
    for (int t = 0; t < 6; ++t) {
        std::vector<double> x = {urand(rng, 0.4, 2), urand(rng, -1, 1)};
        std::vector<double> y = {urand(rng, -2, -0.4), urand(rng, -1, 1)};
        for (auto [i, j] : {std::pair{1, 2}, {2, 1}, {1, 1}, {2, 2}}) {
            double quad = G.derivative_quadrature(x, y, {i}, {j});
            double fd = G.derivative_fd(x, y, {{false, i}, {true, j}});
            CHECK(std::abs(quad - fd) <= 1e-3 * std::max(std::abs(quad), 1e-10));
        }
    }
}

TEST_CASE("x and y derivatives commute (representation path)") {
    GammaGrushin G(grushin1());
    std::vector<double> x = {0.8, -0.3}, y = {-1.1, 0.9};
    double a = G.derivative_fd(x, y, {{false, 1}, {true, 2}});
    double b = G.derivative_fd(x, y, {{true, 2}, {false, 1}});
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
}

TEST_CASE("first derivatives decay along a ray") {
    GammaGrushin G(grushin1());
    std::vector<double> x = {1.0, 0.0};
    double prev = 1e300;
    for (double s = 2.0; s < 40.0; s *= 1.6) {
        std::vector<double> y = {s, 0.5 * s};
        double v = std::abs(G.derivative_quadrature(x, y, {}, {1}));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("analytic y-gradient matches finite differences") {
    GammaGrushin G(grushin1());
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x = {urand(rng, -2, 2), urand(rng, -2, 2)};
        std::vector<double> y = {urand(rng, -2, 2), urand(rng, -2, 2)};
        if (grushin_distance_surrogate(x, y) < 0.3) continue;
        auto g = G.grad_y(x, y);
        double h = 1e-6;
        double d1 = (G.closed_form(x, {y[0] + h, y[1]}) - G.closed_form(x, {y[0] - h, y[1]})) /
                    (2 * h);
        double d2 = (G.closed_form(x, {y[0], y[1] + h}) - G.closed_form(x, {y[0], y[1] - h})) /
                    (2 * h);
        CHECK(g[0] == doctest::Approx(d1).epsilon(1e-5));
        CHECK(g[1] == doctest::Approx(d2).epsilon(1e-5));
    }
}

TEST_CASE("Gamma(x;.) is L-harmonic away from the pole (numeric Laplacian)") {
    GammaGrushin G(grushin1());
    for (auto [x, y] : {std::pair<std::vector<double>, std::vector<double>>{{1.0, 0.0}, {2.0, 1.0}},
                        {{0.0, 0.0}, {1.5, -0.7}},
                        {{-1.0, 2.0}, {0.5, 2.5}}}) {
        double h = 1e-4;
        auto f = [&](double a, double b) { return G.closed_form(x, {a, b}); };
        double f0 = f(y[0], y[1]);
        double d11 = (f(y[0] + h, y[1]) - 2 * f0 + f(y[0] - h, y[1])) / (h * h);
        double d22 = (f(y[0], y[1] + h) - 2 * f0 + f(y[0], y[1] - h)) / (h * h);
        double L = d11 + y[0] * y[0] * d22;
        double scale = std::abs(d11) + std::abs(y[0] * y[0] * d22) + 1e-12;
        CHECK(std::abs(L) / scale < 1e-5);
    }
}

TEST_CASE("pole: power-type pole crosses 1e3 at a bisected radius") {
    GammaGrushin G(grushin1());
    G.set_gamma0(0.1);  // conservative scale; divergence is gamma0-independent
    std::vector<double> x = {0.0, 0.0};
    auto val = [&](double d) { return G.closed_form(x, {d, 0.0}); };
    double lo = 1e-12, hi = 1.0;
    REQUIRE(val(hi) < 1e3);
    REQUIRE(val(lo) > 1e3);
    for (int it = 0; it < 80; ++it) {
        double mid = std::sqrt(lo * hi);
        (val(mid) >= 1e3 ? lo : hi) = mid;
    }
    CHECK(val(0.5 * lo) >= 1e3);
    CHECK(lo > 0);
    CHECK(lo < hi);
}

TEST_CASE("pole: logarithmic pole diverges monotonically (slowly)") {
    // at x1 != 0 the divergence is logarithmic: Gamma ~ (gamma0/|x1|) log(1/d),
    // so fixed large thresholds are out of double-precision reach; divergence
    // itself is testable
    GammaGrushin G(grushin1());
    std::vector<double> x = {1.0, 0.0};
    double prev = 0;
    for (double d = 1e-2; d > 1e-13; d *= 1e-1) {
        double v = G.closed_form(x, {x[0] + d, x[1]});
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > 2.0 * G.closed_form(x, {x[0] + 1e-2, x[1]}));
}

TEST_CASE("calibration: self-consistent gamma0 with -phi recovery") {
    GammaGrushin G(grushin1());
    auto cal = G.calibrate(1e-7, 192);
    CAPTURE(cal.gamma0);
    CHECK(cal.converged);
    CHECK(cal.gamma0 > 0.0);
    CHECK(cal.cross_check_rel < 1e-3);
    CHECK(cal.recovered_rel_err < 1e-3);
    CHECK(G.gamma0() == cal.gamma0);
}

TEST_CASE("bump Laplacian is analytically correct (finite-difference check)") {
    GammaGrushin::Bump phi{1.5, 0.5, 1.0};
    std::mt19937_64 rng(53);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> y = {urand(rng, 0.7, 2.3), urand(rng, -0.3, 1.3)};
        if (phi.rho2(y) > 0.85) continue;
        double h = 1e-5;
        double p0 = phi(y);
        double p11 = (phi({y[0] + h, y[1]}) - 2 * p0 + phi({y[0] - h, y[1]})) / (h * h);
        double p22 = (phi({y[0], y[1] + h}) - 2 * p0 + phi({y[0], y[1] - h})) / (h * h);
        double expect = p11 + y[0] * y[0] * p22;
        CHECK(phi.lap(y) == doctest::Approx(expect).epsilon(1e-4));
    }
}
