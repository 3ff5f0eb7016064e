#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "macert/func_core.hpp"
#include "macert/sqrt_lift.hpp"

using namespace macert;
using namespace macert::lift1d;

namespace {

SmoothFn1D f_9x4(Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [](Jet4 x) { return 9.0 * x * x * x * x; });
}
SmoothFn1D f_x2(Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [](Jet4 x) { return x * x; });
}
SmoothFn1D f_us(double s, Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [s](Jet4 x) {
        Jet4 x2 = x * x;
        return 9.0 * s * s * x2 + 9.0 * x2 * x2;
    });
}

}  // namespace

TEST_CASE("lift of f = 9x^4 is u = |x|^3") {
    auto L = lift(f_9x4(), SignConvention::OddAboutZero);
    // u_x = sign(x) * 3x^2, u_xxx = 6 sign(x) by the closed formula
    CHECK(L.ux(0.5) == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(L.ux(-0.5) == Catch::Approx(-0.75).epsilon(1e-12));
    CHECK(L.uxxx(0.5) == Catch::Approx(6.0).epsilon(1e-10));
    CHECK(L.uxxx(-0.5) == Catch::Approx(-6.0).epsilon(1e-10));
    CHECK(L.uxx(0.25) == Catch::Approx(1.5).epsilon(1e-10));
    // u by quadrature matches |x|^3
    for (double x : {-0.8, -0.1, 0.3, 1.0})
        CHECK(L.u(x) == Catch::Approx(std::abs(x) * x * x).margin(1e-9));
    // odd convention invariant: u_x(x) * x >= 0
    for (double x : {-1.5, -0.2, 0.0, 0.4, 2.0}) CHECK(L.ux(x) * x >= 0.0);
    // (u_x)^2 = f to 1e-12 relative outside the zero set
    for (double x : {-1.0, -0.3, 0.2, 0.9}) {
        const double f = 9 * std::pow(x, 4);
        CHECK(L.ux(x) * L.ux(x) == Catch::Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("lift rejects significantly negative f and flags zero plateaus") {
    auto neg = make_smooth_fn(Interval(-1, 1), [](Jet4 x) { return x * x - 0.5; });
    CHECK_THROWS_AS(lift(neg), std::domain_error);

    auto zero = make_smooth_fn(Interval(-1, 1), [](Jet4) { return Jet4::constant(0.0); });
    auto Lz = lift(zero);
    REQUIRE(Lz.zero_set.size() == 1);
    CHECK(Lz.zero_set[0].lo == Catch::Approx(-1.0));
    CHECK(Lz.zero_set[0].hi == Catch::Approx(1.0));
    CHECK(Lz.u(0.7) == Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(Lz.uxxx(0.0), UndefinedValueError);
    CHECK_THROWS_AS(Lz.uxx(0.0), UndefinedValueError);
}

TEST_CASE("lift of the cusp-smoothing family") {
    const double s = 0.1;
    auto L = lift(f_us(s));
    // u = (x^2+s^2)^(3/2) - s^3 with u(0) = 0
    CHECK(L.ux(0.1) == Catch::Approx(0.042426406871192854).epsilon(1e-12));
    auto u_exact = [s](double x) {
        return std::pow(x * x + s * s, 1.5) - s * s * s;
    };
    for (double x : {-0.5, 0.05, 0.3}) CHECK(L.u(x) == Catch::Approx(u_exact(x)).margin(1e-9));
    // formula check against the closed third derivative x(6x^2+9s^2)/(x^2+s^2)^{3/2}
    for (double x : {-0.4, 0.07, 0.2}) {
        const double expect = x * (6 * x * x + 9 * s * s) / std::pow(x * x + s * s, 1.5);
        CHECK(L.uxxx(x) == Catch::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("u_xxx from the closed formula matches finite differences of u_x") {
    auto L = lift(f_us(0.35));
    auto g = sample_grid([&](double x) { return L.ux(x); }, Interval(-1, 1), 2001);
    auto d2h = finite_diff(g, 2);
    auto g2 = sample_grid([&](double x) { return L.ux(x); }, Interval(-1, 1), 4001);
    auto d2h2 = finite_diff(g2, 2);
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < d2h.n(); ++i)
        if (d2h.valid(i) && std::abs(d2h.x(i)) > 0.01)
            e1 = std::max(e1, std::abs(d2h.values[i] - L.uxxx(d2h.x(i))));
    for (int i = 0; i < d2h2.n(); ++i)
        if (d2h2.valid(i) && std::abs(d2h2.x(i)) > 0.01)
            e2 = std::max(e2, std::abs(d2h2.values[i] - L.uxxx(d2h2.x(i))));
    CHECK(e1 / e2 >= 3.0);  // O(h^2) refinement
    CHECK(e1 / e2 <= 5.0);
}

TEST_CASE("gradient bound") {
    auto rep = check_gradient_bound(f_x2(), Interval(-1, 1));
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == Catch::Approx(2.0 / 3.0).epsilon(1e-6));

    auto one = make_smooth_fn(Interval(-4, 4), [](Jet4) { return Jet4::constant(1.0); });
    rep = check_gradient_bound(one, Interval(-1, 1));
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == 0.0);

    auto neg = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return x * x - 1.0; });
    CHECK_THROWS_AS(check_gradient_bound(neg, Interval(-1, 1)), std::domain_error);
}

TEST_CASE("interpolation constants satisfy the Taylor-system inequality") {
    const auto c = interpolation_constants();
    CHECK(c.A >= 1.0);
    CHECK(c.B > 0.0);
    // frozen from the 3x3 system: A = 363, B = 1.24479...
    CHECK(c.A == Catch::Approx(363.0).epsilon(1e-9));
    CHECK(c.B == Catch::Approx(1.2447916666666663).epsilon(1e-9));

    // trivial: G(y) = y + 1 forces A >= 1; G = 1 gives 0 <= A
    // randomized admissible quartics: G' = cubic - exact min on [-1,0], G(-1) >= 0
    std::mt19937_64 rng(987654321);
    std::uniform_real_distribution<double> U(-3.0, 3.0), U0(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double b0 = U(rng), b1 = U(rng), b2 = U(rng), b3 = U(rng);
        auto q = [&](double y) { return b0 + b1 * y + b2 * y * y + b3 * y * y * y; };
        double mn = std::min(q(-1.0), q(0.0));
        if (std::abs(b3) > 1e-14) {
            const double disc = 4 * b2 * b2 - 12 * b3 * b1;
            if (disc >= 0) {
                for (double r : {(-2 * b2 + std::sqrt(disc)) / (6 * b3),
                                 (-2 * b2 - std::sqrt(disc)) / (6 * b3)})
                    if (r >= -1 && r <= 0) mn = std::min(mn, q(r));
            }
        } else if (std::abs(b2) > 1e-14) {
            const double r = -b1 / (2 * b2);
            if (r >= -1 && r <= 0) mn = std::min(mn, q(r));
        }
        const double c0 = U0(rng);
        // G' = q - mn; G(0) = c0 + int_{-1}^0 G'
        const double int_gp = (b0 - mn) - b1 / 2.0 + b2 / 3.0 - b3 / 4.0;
        const double G0 = c0 + int_gp;
        const double G1 = b0 - mn, G2 = b1, G3 = 2 * b2, G4 = std::abs(6 * b3);
        const double lhs = std::abs(G1) + std::abs(G2) + std::abs(G3);
        if (lhs > c.A * G0 + c.B * G4 + 1e-9) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("derivative ladder") {
    // boundary case f = x^4 at x = 0.5 (Case2 at equality): |f'|/f^{3/4} = 4
    auto f4 = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return x * x * x * x; });
    auto rep = check_derivative_ladder(f4, 0.5, LadderBranch::Case2);
    REQUIRE(rep.witnesses.size() == 3);
    CHECK(rep.witnesses[0].value == Catch::Approx(4.0).epsilon(1e-10));
    CHECK(rep.passed);

    // f = x^2 at 0.1 (Case1, f >= x^4 near 0): |2ff''-(f')^2|/f^{3/2} = 0
    auto rep1 = check_derivative_ladder(f_x2(Interval(-1.5, 1.5)), 0.1, LadderBranch::Case1);
    CHECK(rep1.empirical_constant == Catch::Approx(0.0).margin(1e-10));
    CHECK(rep1.passed);

    // branch preconditions enforced
    CHECK_THROWS_AS(check_derivative_ladder(f_x2(), 0.1, LadderBranch::Case2),
                    std::invalid_argument);
    auto fhalf = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return 0.5 * x * x * x * x; });
    CHECK_THROWS_AS(check_derivative_ladder(fhalf, 0.5, LadderBranch::Case1),
                    std::invalid_argument);
    // the equality boundary f = x^4 goes to Case2 but Case1 accepts the tie too
    CHECK_NOTHROW(check_derivative_ladder(f4, 0.5, LadderBranch::Case1));

    // bounded ladder across the family parameter
    for (double s : {0.1, 0.01, 0.001}) {
        auto rep2 = check_derivative_ladder(f_us(s, Interval(-1.5, 1.5)), s, LadderBranch::Case1);
        CHECK(rep2.passed);
    }
}

TEST_CASE("quotient fields") {
    auto q = quotient_fields(f_x2(Interval(-1, 1)));
    CHECK(q.g.eval(0.5) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(q.g.eval(0.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(q.h.eval(0.3) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(q.h.eval(0.0) == Catch::Approx(2.0).epsilon(1e-12));

    auto q4 = quotient_fields(
        make_smooth_fn(Interval(-1, 1), [](Jet4 x) { return x * x * x * x; }));
    for (double x : {-0.7, 0.0, 0.0005, 0.4}) {
        CHECK(q4.g.eval(x) == Catch::Approx(x * x).margin(1e-9));
        CHECK(q4.h.eval(x) == Catch::Approx(4 * x * x).margin(1e-9));
        CHECK(q4.g.deriv(x, 2) == Catch::Approx(2.0).margin(1e-6));
    }

    // continuity across the near-zero switch
    for (double x : {0.0009, 0.0011, -0.0009, -0.0011}) {
        CHECK(q4.g.eval(x) == Catch::Approx(x * x).margin(1e-10));
    }

    CHECK_THROWS_AS(quotient_fields(make_smooth_fn(Interval(-1, 1),
                                                   [](Jet4 x) { return x * x + 1.0; })),
                    std::domain_error);
}

TEST_CASE("third derivative constant") {
    auto rep = third_derivative_constant(f_9x4(), Interval(-1, 1));
    CHECK(rep.passed);
    // sup|u_xxx| = 6, ||f||_C4([-2,2]) = 432
    CHECK(rep.empirical_constant == Catch::Approx(6.0 / std::sqrt(432.0)).epsilon(1e-6));

    auto cst = make_smooth_fn(Interval(-4, 4), [](Jet4) { return Jet4::constant(2.0); });
    rep = third_derivative_constant(cst, Interval(-1, 1));
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == Catch::Approx(0.0).margin(1e-12));

    // family sweep: constants uniformly bounded as s -> 0
    double cmax = 0.0, cmin = 1e300;
    for (double s : {1.0, 0.1, 0.01}) {
        auto r = third_derivative_constant(f_us(s), Interval(-1, 1));
        CHECK(r.passed);
        cmax = std::max(cmax, r.empirical_constant);
        cmin = std::min(cmin, r.empirical_constant);
    }
    CHECK(cmax < 1.0);  // no blow-up
    CHECK(cmax - cmin <= 0.2 * cmax);

    // xf' >= 0 violation reported with witness
    auto osc = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return sin(x) * sin(x) + 0.5; });
    auto bad = third_derivative_constant(osc, Interval(-1, 1));
    CHECK_FALSE(bad.passed);
    CHECK_FALSE(bad.witnesses.empty());
}

TEST_CASE("scale invariance of the third-derivative ratio") {
    // replacing f by c^2 f scales sup|u_xxx| by c and ||f||^{1/2} by c
    for (double c : {2.0, 10.0}) {
        auto base = third_derivative_constant(f_us(0.25), Interval(-1, 1));
        auto scaled = third_derivative_constant(scale_output(f_us(0.25), c * c), Interval(-1, 1));
        CHECK(scaled.empirical_constant ==
              Catch::Approx(base.empirical_constant).epsilon(1e-9));
    }
}

TEST_CASE("u_xx extension across zero") {
    CHECK(extend_uxx_across_zero(f_x2()) == Catch::Approx(1.0));
    CHECK(extend_uxx_across_zero(f_9x4()) == 0.0);
    auto f = make_smooth_fn(Interval(-4, 4), [](Jet4 x) {
        Jet4 x2 = x * x;
        return 4.0 * x2 + x2 * x2;
    });
    CHECK(extend_uxx_across_zero(f) == Catch::Approx(2.0).epsilon(1e-14));
    // matches the one-sided numerical limits within 1e-4
    for (double side : {-1.0, 1.0}) {
        auto lim = uxx_one_sided_limit(f, 0.0, side);
        REQUIRE(lim.has_value());
        CHECK(*lim == Catch::Approx(2.0).margin(1e-4));
    }
    CHECK_THROWS_AS(extend_uxx_across_zero(
                        make_smooth_fn(Interval(-1, 1), [](Jet4 x) { return x * x + 1.0; })),
                    std::domain_error);
}

TEST_CASE("C^{2,1} certification in one dimension") {
    auto rep = certify_c21_1d(f_9x4(), Interval(-1, 1), C21Mode::ZeroAllowed);
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == Catch::Approx(6.0).epsilon(0.01));
    // boundary witness value 0 at the zero of f
    REQUIRE_FALSE(rep.witnesses.empty());
    for (const auto& w : rep.witnesses) CHECK(std::abs(w.value) < 1e-6);

    auto one = make_smooth_fn(Interval(-4, 4), [](Jet4) { return Jet4::constant(1.0); });
    rep = certify_c21_1d(one, Interval(-1, 1), C21Mode::StrictlyPositive);
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == Catch::Approx(0.0).margin(1e-12));

    // monotonicity violation rejected in zero-allowed mode
    auto osc = make_smooth_fn(Interval(-4, 4), [](Jet4 x) { return sin(x) * sin(x) + 0.1; });
    auto bad = certify_c21_1d(osc, Interval(-1, 1), C21Mode::ZeroAllowed);
    CHECK_FALSE(bad.passed);

    // positivity violation rejected in strictly-positive mode
    auto badp = certify_c21_1d(f_9x4(), Interval(-1, 1), C21Mode::StrictlyPositive);
    CHECK_FALSE(badp.passed);
}

TEST_CASE("scaled bound check") {
    auto rep = scaled_bound_check(f_9x4(), 0.5);
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == Catch::Approx(6.0).epsilon(1e-6));

    auto cst = make_smooth_fn(Interval(-4, 4), [](Jet4) { return Jet4::constant(3.0); });
    rep = scaled_bound_check(cst, 0.25);
    CHECK(rep.passed);
    CHECK(rep.empirical_constant == Catch::Approx(0.0).margin(1e-12));

    rep = scaled_bound_check(f_us(0.1), 0.25);
    CHECK(rep.passed);
}

TEST_CASE("nondegenerate Taylor values") {
    auto Rconst = [](double c) {
        return make_smooth_fn(Interval(-0.5, 0.5), [c](Jet4) { return Jet4::constant(c); });
    };
    auto tv = nondegenerate_taylor(1.0, Rconst(1.0));
    CHECK(tv.d2 == Catch::Approx(1.0));
    CHECK(tv.d3 == Catch::Approx(1.0));
    CHECK(tv.d4 == Catch::Approx(-0.75));
    CHECK(tv.max_deviation < 1e-6);

    tv = nondegenerate_taylor(1.0, Rconst(0.0));
    CHECK(tv.d2 == Catch::Approx(1.0));
    CHECK(tv.d3 == Catch::Approx(0.0).margin(1e-12));
    CHECK(tv.d4 == Catch::Approx(0.0).margin(1e-12));

    tv = nondegenerate_taylor(4.0, Rconst(2.0));
    CHECK(tv.d2 == Catch::Approx(2.0));
    CHECK(tv.d3 == Catch::Approx(1.0));
    CHECK(tv.d4 == Catch::Approx(-3.0 / 8.0));
    CHECK(tv.max_deviation < 1e-6);

    CHECK_THROWS_AS(nondegenerate_taylor(-1.0, Rconst(1.0)), std::invalid_argument);

    // randomized cross-check against finite differences of the lifted u_x
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> UM(0.1, 10.0), UC(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double M = UM(rng);
        const double a0 = UC(rng), a1 = UC(rng), a2 = UC(rng), a3 = UC(rng);
        auto R = make_smooth_fn(Interval(-0.5, 0.5), [=](Jet4 x) {
            return Jet4::constant(a0) + a1 * x + a2 * x * x + a3 * x * x * x;
        });
        auto v = nondegenerate_taylor(M, R);
        CHECK(v.max_deviation < 1e-5);
    }
}
