#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "macert/func_core.hpp"
#include "macert/quadrature.hpp"

using namespace macert;

namespace {

SmoothFn1D poly_x2(Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [](Jet4 x) { return x * x; });
}
SmoothFn1D poly_9x4(Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [](Jet4 x) { return 9.0 * x * x * x * x; });
}

}  // namespace

TEST_CASE("jet arithmetic reproduces closed-form derivatives") {
    // (x^2+1)*sin(x) at x=0.7, against hand values
    const double x0 = 0.7;
    auto j = Jet4::variable(x0);
    auto r = (j * j + 1.0) * sin(j);
    const double s = std::sin(x0), c = std::cos(x0);
    CHECK(r.value() == Catch::Approx((x0 * x0 + 1) * s).epsilon(1e-14));
    CHECK(r.deriv(1) == Catch::Approx(2 * x0 * s + (x0 * x0 + 1) * c).epsilon(1e-14));
    CHECK(r.deriv(2) == Catch::Approx(2 * s + 4 * x0 * c - (x0 * x0 + 1) * s).epsilon(1e-13));

    // exp(-1/x^2) at x=0.5: f' = 2/x^3 e^{-1/x^2}
    auto e = exp(-recip(j * j));
    auto je = Jet4::variable(0.5);
    e = exp(-recip(je * je));
    const double E = std::exp(-4.0);
    CHECK(e.value() == Catch::Approx(E).epsilon(1e-13));
    CHECK(e.deriv(1) == Catch::Approx(2.0 / 0.125 * E).epsilon(1e-12));

    // sqrt and pow agree
    auto a = sqrt(je * je + 2.0);
    auto b = pow(je * je + 2.0, 0.5);
    for (int k = 0; k <= 4; ++k) CHECK(a.deriv(k) == Catch::Approx(b.deriv(k)).margin(1e-12));
}

TEST_CASE("ck_norm on reference polynomials") {
    // max over orders 0..2 of sup on [-2,2]: {4, 4, 2} -> 4
    CHECK(ck_norm(poly_x2(), 2, Interval(-2, 2), 2001) == Catch::Approx(4.0).epsilon(1e-12));
    // f = 9x^4 on [-2,2]: {144, 288, 432, 432, 216} -> 432 (brute-force oracle)
    CHECK(ck_norm(poly_9x4(), 4, Interval(-2, 2), 4001) == Catch::Approx(432.0).epsilon(1e-12));
    // zero function
    auto z = make_smooth_fn(Interval(-1, 1), [](Jet4) { return Jet4::constant(0.0); });
    CHECK(ck_norm(z, 4, Interval(-1, 1)) == 0.0);
    // monotone in k and in I
    auto f = poly_9x4();
    CHECK(ck_norm(f, 2, Interval(-1, 1)) <= ck_norm(f, 3, Interval(-1, 1)));
    CHECK(ck_norm(f, 3, Interval(-1, 1)) <= ck_norm(f, 3, Interval(-2, 2)));
    CHECK_THROWS_AS(ck_norm(f, 5, Interval(-1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(ck_norm(f, 2, Interval(-5, 5)), std::invalid_argument);
}

TEST_CASE("finite_diff central stencils") {
    // cubic: third derivative exactly 6 (up to roundoff)
    auto g = sample_grid([](double x) { return x * x * x; }, Interval(-1, 1), 101);
    auto d3 = finite_diff(g, 3);
    for (int i = 0; i < d3.n(); ++i)
        if (d3.valid(i)) CHECK(d3.values[i] == Catch::Approx(6.0).margin(1e-6));

    // constant: first derivative 0
    auto c = sample_grid([](double) { return 5.0; }, Interval(-1, 1), 51);
    auto d1 = finite_diff(c, 1);
    for (int i = 0; i < d1.n(); ++i)
        if (d1.valid(i)) CHECK(d1.values[i] == Catch::Approx(0.0).margin(1e-12));

    // sin on [0,1], n=1001: second derivative = -sin to 1e-5
    auto s = sample_grid([](double x) { return std::sin(x); }, Interval(0, 1), 1001);
    auto d2 = finite_diff(s, 2);
    double max_err = 0.0;
    for (int i = 0; i < d2.n(); ++i)
        if (d2.valid(i)) max_err = std::max(max_err, std::abs(d2.values[i] + std::sin(d2.x(i))));
    CHECK(max_err <= 1e-5);

    CHECK_THROWS_AS(finite_diff(sample_grid([](double) { return 0.0; }, Interval(0, 1), 4), 3),
                    std::invalid_argument);
}

TEST_CASE("finite differences converge to the oracle derivative at O(h^2)") {
    auto f = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return sin(x * 1.3) * exp(x * 0.25); });
    for (int order = 1; order <= 4; ++order) {
        const double x0 = 0.37;
        auto fn = [&](double x) { return f.deriv(x, order - 1); };
        const double h = 0.05;
        const double e1 = std::abs(central_diff(fn, x0, 1, h) - f.deriv(x0, order));
        const double e2 = std::abs(central_diff(fn, x0, 1, 0.5 * h) - f.deriv(x0, order));
        if (e2 > 1e-11) {
            const double ratio = e1 / e2;
            CHECK(ratio >= 3.5);
            CHECK(ratio <= 4.5);
        }
    }
}

TEST_CASE("rescale") {
    auto u = poly_x2();
    auto r = rescale(u, 2.0);  // x^2/4
    CHECK(r.eval(1.0) == Catch::Approx(0.25).epsilon(1e-14));
    CHECK(r.deriv(0.3, 2) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(r.domain.hi == Catch::Approx(8.0));

    auto id = rescale(make_smooth_fn(Interval(-1, 1), [](Jet4 x) { return x; }), 1.0);
    CHECK(id.eval(0.4) == Catch::Approx(0.4).epsilon(1e-15));

    // |x|^3 oracle rescaled by s=1/2: third derivative 48*sign(x) away from 0
    auto cube = SmoothFn1D(Interval(-1, 1), [](double x) {
        Jet4 j = Jet4::variable(x);
        Jet4 r = j * j * j;
        if (x < 0) r = -r;
        return r;
    });
    auto half = rescale(cube, 0.5);
    CHECK(half.deriv(0.2, 3) == Catch::Approx(48.0).epsilon(1e-12));
    CHECK(half.deriv(-0.2, 3) == Catch::Approx(-48.0).epsilon(1e-12));

    CHECK_THROWS_AS(rescale(u, -1.0), std::invalid_argument);

    // round trip within 1e-12
    auto rt = rescale(rescale(u, 3.0), 1.0 / 3.0);
    for (double x : {-2.0, -0.5, 0.0, 1.25, 3.9})
        CHECK(rt.eval(x) == Catch::Approx(u.eval(x)).margin(1e-12));
}

TEST_CASE("fit_power_law") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; k <= 4; ++k) pts.push_back({std::pow(10.0, -k), 9.0 * std::pow(10.0, k)});
    auto fit = fit_power_law(pts);
    CHECK(fit.exponent == Catch::Approx(-1.0).margin(0.01));
    CHECK(fit.coefficient == Catch::Approx(9.0).epsilon(1e-6));
    CHECK(fit.r_squared >= 0.999);

    pts.clear();
    for (int k = 1; k <= 4; ++k) pts.push_back({std::pow(10.0, -k), 7.0});
    fit = fit_power_law(pts);
    CHECK(fit.exponent == Catch::Approx(0.0).margin(0.01));

    // u_s'''' (0) = 9/s for the cusp-smoothing family
    pts.clear();
    for (double s : {0.1, 0.05, 0.025, 0.0125}) pts.push_back({s, 9.0 / s});
    fit = fit_power_law(pts);
    CHECK(fit.exponent == Catch::Approx(-1.0).margin(0.05));

    // noise robustness: c*s^p with 1% multiplicative noise recovers p +- 0.05
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    for (double p : {-2.0, -0.5, 1.5}) {
        pts.clear();
        for (int k = 0; k < 8; ++k) {
            const double s = std::pow(10.0, -0.25 * k) * 0.5;
            pts.push_back({s, 3.0 * std::pow(s, p) * (1.0 + noise(rng))});
        }
        fit = fit_power_law(pts);
        CHECK(fit.exponent == Catch::Approx(p).margin(0.05));
    }

    CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, 1}, {3, 1}, {4, -1}, {20, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{1, 1}, {1.1, 1}, {1.2, 1}, {1.3, 1}}),
                    std::invalid_argument);
}

TEST_CASE("lipschitz_seminorm") {
    auto a = sample_grid([](double x) { return std::abs(x); }, Interval(-1, 1), 1001);
    CHECK(lipschitz_seminorm(a) == Catch::Approx(1.0).epsilon(1e-12));

    auto c = sample_grid([](double) { return 3.0; }, Interval(-1, 1), 11);
    CHECK(lipschitz_seminorm(c) == 0.0);

    // u_xx = 6|x| for u=|x|^3
    auto uxx = sample_grid([](double x) { return 6.0 * std::abs(x); }, Interval(-1, 1), 2001);
    CHECK(lipschitz_seminorm(uxx) == Catch::Approx(6.0).margin(1e-8));
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
          Catch::Approx(1.0 / 3.0).margin(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          Catch::Approx(2.0).margin(1e-10));
    // orientation
    CHECK(integrate([](double x) { return x; }, 1.0, 0.0, 1e-12) ==
          Catch::Approx(-0.5).margin(1e-12));
    // mollifier bump mass on [-1,1] (frozen by independent quadrature)
    const double mass =
        integrate([](double x) { return std::exp(1.0 / (x * x - 1.0)); }, -0.999999999, 0.999999999,
                  1e-13);
    CHECK(mass == Catch::Approx(0.4439938161680793).margin(1e-9));
}

TEST_CASE("Grid1D refinement stability of ck_norm-style sampling") {
    auto f = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return sin(x * 2.1) * sin(x * 2.1) + x * x * 0.1; });
    const double a = ck_norm(f, 2, Interval(-2, 2), 4097);
    const double b = ck_norm(f, 2, Interval(-2, 2), 8193);
    CHECK(std::abs(a - b) <= 0.01 * b);
}
