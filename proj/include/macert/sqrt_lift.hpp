#pragma once

// The 1D square-root lift: recover u with u_x^2 = f from a nonnegative C^4
// function f, with closed-form u_xx, u_xxx off the zero set of f, plus the
// verification operations built on it (gradient bound, interpolation
// constants, derivative ladder, third-derivative constant, C^{2,1}
// certification, scaled bound, nondegenerate Taylor values).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "macert/func_core.hpp"
#include "macert/interval.hpp"
#include "macert/quadrature.hpp"
#include "macert/report.hpp"

namespace macert::lift1d {

enum class SignConvention { OddAboutZero, GloballyNonnegative, GloballyNonpositive };

// Signals evaluation of u_xx / u_xxx strictly inside the zero set of f.
struct UndefinedValueError : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

using macert::fmt_g;

// |u_xx| building blocks from the jet of f (sign applied by callers).
inline double uxx_magnitude(const Jet4& fj) {
    const double f = fj.value();
    return fj.deriv(1) / (2.0 * std::sqrt(f));
}
inline double uxxx_magnitude(const Jet4& fj) {
    const double f = fj.value(), f1 = fj.deriv(1), f2 = fj.deriv(2);
    return (2.0 * f * f2 - f1 * f1) / (4.0 * f * std::sqrt(f));
}

}  // namespace detail

class SqrtLift {
  public:
    SmoothFn1D f;
    SignConvention convention = SignConvention::OddAboutZero;
    double zero_threshold = 0.0;
    std::vector<Interval> zero_set;

    double sign_at(double x) const {
        switch (convention) {
            case SignConvention::OddAboutZero: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            case SignConvention::GloballyNonnegative: return 1.0;
            case SignConvention::GloballyNonpositive: return -1.0;
        }
        return 1.0;
    }

    bool in_zero_set(double x) const {
        for (const auto& z : zero_set)
            if (x >= z.lo && x <= z.hi) return true;
        return false;
    }
    bool strictly_inside_zero_set(double x) const {
        const double eps = 1e-12 * (1.0 + std::abs(x));
        for (const auto& z : zero_set)
            if (x > z.lo + eps && x < z.hi - eps) return true;
        return false;
    }

    double ux(double x) const {
        const double v = f.eval(x);
        return sign_at(x) * std::sqrt(std::max(v, 0.0));
    }

    // u(x) = int_0^x u_x, so u(0) = 0.
    double u(double x) const {
        return integrate([this](double t) { return ux(t); }, anchor_, x, quad_tol_);
    }

    double uxx(double x) const {
        if (strictly_inside_zero_set(x))
            throw UndefinedValueError("u_xx undefined inside the zero set of f");
        return uxx_or_extension(x);
    }
    double uxxx(double x) const {
        if (strictly_inside_zero_set(x) || f.eval(x) <= 0.0)
            throw UndefinedValueError("u_xxx undefined on the zero set of f");
        return sign_at(x) * detail::uxxx_magnitude(f.jets(x));
    }

    // Formula where f > 0; the Taylor-coefficient extension sqrt(max(f''/2, 0))
    // where f vanishes exactly.  Never throws; this is the composition the
    // C^{2,1} certificate uses across zero-set boundaries.
    double uxx_or_extension(double x) const {
        const Jet4 j = f.jets(x);
        if (j.value() > 0.0) return sign_at(x) * detail::uxx_magnitude(j);
        return std::sqrt(std::max(0.5 * j.deriv(2), 0.0));
    }

    double anchor() const { return anchor_; }

    friend SqrtLift lift(const SmoothFn1D&, SignConvention, int, double);

  private:
    double anchor_ = 0.0;
    double quad_tol_ = 1e-10;
};

// Build the lift.  Rejects f that dips below -zero_threshold; locates the
// thresholded zero set by scanning and bisection-refining the crossings.
inline SqrtLift lift(const SmoothFn1D& f, SignConvention convention = SignConvention::OddAboutZero,
                     int scan_n = kDefaultNormSamples, double quad_tol = 1e-10) {
    SqrtLift L;
    L.f = f;
    L.convention = convention;
    L.quad_tol_ = quad_tol;
    L.anchor_ = f.domain.contains(0.0) ? 0.0 : f.domain.midpoint();

    const double c0 = ck_norm(f, 0, f.domain, scan_n);
    const double thr = 1e-13 * (1.0 + c0);
    L.zero_threshold = thr;

    const double h = f.domain.length() / (scan_n - 1);
    auto fx = [&](double x) { return f.eval(x); };
    double run_lo = 0.0;
    bool in_run = false;
    double prev_x = f.domain.lo, prev_v = fx(prev_x);
    if (prev_v < -thr)
        throw std::domain_error("lift: f is significantly negative at x=" +
                                fmt_g(prev_x));

    auto refine = [&](double a, double b) {  // f(a)-thr and f(b)-thr have opposite signs
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            if ((fx(a) - thr) * (fx(m) - thr) <= 0.0)
                b = m;
            else
                a = m;
        }
        return 0.5 * (a + b);
    };

    if (prev_v < thr) {
        in_run = true;
        run_lo = f.domain.lo;
    }
    for (int i = 1; i < scan_n; ++i) {
        const double x = f.domain.lo + i * h;
        const double v = fx(x);
        if (v < -thr)
            throw std::domain_error("lift: f is significantly negative at x=" + fmt_g(x));
        if (!in_run && v < thr) {
            in_run = true;
            run_lo = refine(prev_x, x);
        } else if (in_run && v >= thr) {
            const double run_hi = refine(prev_x, x);
            if (run_hi > run_lo) L.zero_set.push_back(Interval(run_lo, run_hi));
            in_run = false;
        }
        prev_x = x;
        prev_v = v;
    }
    if (in_run && f.domain.hi > run_lo) L.zero_set.push_back(Interval(run_lo, f.domain.hi));
    return L;
}

// ---------------------------------------------------------------------------
// Lemma "gradient of a nonnegative C^2 function": |f'| <= (3/2)||f||_{C2(2I)}^{1/2} f^{1/2}.

inline CertReport check_gradient_bound(const SmoothFn1D& f, Interval I,
                                       int n = kDefaultNormSamples) {
    CertReport rep;
    rep.name = "gradient-bound";
    rep.grid_params.n = n;
    const Interval W = I.scaled(2.0);
    if (!f.domain.contains(W))
        throw std::invalid_argument("check_gradient_bound: 2I exceeds the domain of f");
    const double norm = ck_norm(f, 2, W, n);
    const double neg_thr = 1e-13 * (1.0 + norm);
    const double coef = 1.5 * std::sqrt(norm);
    double max_ratio = 0.0;
    Witness max_w;
    const double h = I.length() / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double x = I.lo + i * h;
        const Jet4 j = f.jets(x);
        const double fv = j.value(), fp = std::abs(j.deriv(1));
        if (fv < -neg_thr) throw std::domain_error("check_gradient_bound: negative f detected");
        const double bound = coef * std::sqrt(std::max(fv, 0.0));
        if (fp > bound * (1.0 + 1e-9) + neg_thr) {
            rep.fail({x, 0.0, fp - bound}, "inequality violated at x=" + fmt_g(x));
        }
        if (bound > 0.0 && fp / bound > max_ratio) {
            max_ratio = fp / bound;
            max_w = {x, 0.0, max_ratio};
        }
    }
    rep.empirical_constant = max_ratio;
    if (rep.passed) rep.witnesses.push_back(max_w);
    rep.note("norm convention: max of |f^(j)|, j=0..2, on " + std::to_string(n) +
             " samples of 2I");
    return rep;
}

// ---------------------------------------------------------------------------
// Interpolation constants A, B: |G'(0)|+|G''(0)|+|G'''(0)| <= A G(0) + B max|G''''|
// for nonnegative nondecreasing C^4 G on [-1,0], from the Taylor systems at
// offsets -1, -1/2, -1/4.

struct InterpolationConstants {
    double A = 0.0;
    double B = 0.0;
    std::array<double, 3> nodes{-1.0, -0.5, -0.25};
};

inline InterpolationConstants interpolation_constants() {
    const double a[3] = {1.0, 0.5, 0.25};
    // rows: G(-a)-G(0) = -a G' + a^2/2 G'' - a^3/6 G'''
    double M[3][3], inv[3][3];
    for (int r = 0; r < 3; ++r) {
        M[r][0] = -a[r];
        M[r][1] = a[r] * a[r] / 2.0;
        M[r][2] = -a[r] * a[r] * a[r] / 6.0;
    }
    const double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                       M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                       M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    inv[0][0] = (M[1][1] * M[2][2] - M[1][2] * M[2][1]) / det;
    inv[0][1] = (M[0][2] * M[2][1] - M[0][1] * M[2][2]) / det;
    inv[0][2] = (M[0][1] * M[1][2] - M[0][2] * M[1][1]) / det;
    inv[1][0] = (M[1][2] * M[2][0] - M[1][0] * M[2][2]) / det;
    inv[1][1] = (M[0][0] * M[2][2] - M[0][2] * M[2][0]) / det;
    inv[1][2] = (M[0][2] * M[1][0] - M[0][0] * M[1][2]) / det;
    inv[2][0] = (M[1][0] * M[2][1] - M[1][1] * M[2][0]) / det;
    inv[2][1] = (M[0][1] * M[2][0] - M[0][0] * M[2][1]) / det;
    inv[2][2] = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) / det;

    // |G^(i)(0)| <= sum_j |inv[i][j]| |d_j| with |d_j| <= G(0) + a_j^4/24 max|G''''|.
    InterpolationConstants c;
    for (int j = 0; j < 3; ++j) {
        double col = 0.0;
        for (int i = 0; i < 3; ++i) col += std::abs(inv[i][j]);
        c.A += col;
        c.B += col * a[j] * a[j] * a[j] * a[j] / 24.0;
    }
    c.nodes = {-a[0], -a[1], -a[2]};
    return c;
}

// ---------------------------------------------------------------------------
// Quotient fields g = f/x^2, h = f'/x with the removable singularity at 0
// filled from the Taylor coefficients of f.  Both are C^2; the jets carry
// orders 0..2 only.

struct QuotientFields {
    SmoothFn1D g;
    SmoothFn1D h;
    double c2_norm_g = 0.0;
    double c2_norm_h = 0.0;
};

inline QuotientFields quotient_fields(const SmoothFn1D& f, int n = kDefaultNormSamples) {
    const double scale = 1.0 + ck_norm(f, 0, f.domain, 257);
    const Jet4 j0 = f.jets(0.0);
    if (std::abs(j0.value()) > 1e-10 * scale || std::abs(j0.deriv(1)) > 1e-8 * scale)
        throw std::domain_error("quotient_fields: requires f(0) = f'(0) = 0");

    const double f2 = j0.deriv(2), f3 = j0.deriv(3), f4 = j0.deriv(4);
    constexpr double x_switch = 1e-3;

    QuotientFields q;
    q.g = SmoothFn1D(
        f.domain,
        [f, f2, f3, f4](double x) -> Jet4 {
            if (std::abs(x) > x_switch) {
                const Jet4 xj = Jet4::variable(x);
                return f.jet(x) / (xj * xj);
            }
            Jet4 r;
            r.a[0] = 0.5 * f2 + f3 * x / 6.0 + f4 * x * x / 24.0;
            r.a[1] = f3 / 6.0 + f4 * x / 12.0;
            r.a[2] = 0.5 * (f4 / 12.0);
            return r;
        },
        2);
    q.h = SmoothFn1D(
        f.domain,
        [f, f2, f3, f4](double x) -> Jet4 {
            if (std::abs(x) > x_switch) {
                Jet4 fp = f.jet(x).derivative_jet();
                return fp / Jet4::variable(x);
            }
            Jet4 r;
            r.a[0] = f2 + f3 * x / 2.0 + f4 * x * x / 6.0;
            r.a[1] = f3 / 2.0 + f4 * x / 3.0;
            r.a[2] = 0.5 * (f4 / 3.0);
            return r;
        },
        2);
    q.c2_norm_g = ck_norm(q.g, 2, f.domain, n);
    q.c2_norm_h = ck_norm(q.h, 2, f.domain, n);
    return q;
}

// ---------------------------------------------------------------------------
// Derivative ladder at a point, following the theorem's case split at f = x^4.

enum class LadderBranch { Case1, Case2 };

inline CertReport check_derivative_ladder(const SmoothFn1D& f, double x, LadderBranch branch) {
    CertReport rep;
    rep.name = branch == LadderBranch::Case1 ? "derivative-ladder-case1"
                                             : "derivative-ladder-case2";
    const Jet4 j = f.jets(x);
    const double fv = j.value();
    const double x4 = x * x * x * x;
    const double tie_tol = 1e-12 * (1.0 + std::abs(fv) + x4);

    if (branch == LadderBranch::Case2) {
        if (fv > x4 + tie_tol)
            throw std::invalid_argument("derivative ladder Case2 requires f(x) <= x^4");
        if (fv <= 0.0) {
            rep.note("f vanishes at x; ladder ratios are zero by convention");
            rep.empirical_constant = 0.0;
            return rep;
        }
        const double eps = std::pow(fv, 0.25);
        const double r1 = std::abs(j.deriv(1)) / std::pow(fv, 0.75);
        const double r2 = std::abs(j.deriv(2)) / std::sqrt(fv);
        const double r3 = std::abs(j.deriv(3)) / eps;
        const auto c = interpolation_constants();
        // window [x - eps, x] for x >= 0, [x, x + eps] for x < 0
        const Interval W = x >= 0.0 ? Interval(x - eps, x) : Interval(x, x + eps);
        double max_f4 = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double t = W.lo + W.length() * i / 256.0;
            if (f.domain.contains(t)) max_f4 = std::max(max_f4, std::abs(f.deriv(t, 4)));
        }
        const double bound = c.A + c.B * max_f4;
        rep.empirical_constant = std::max({r1, r2, r3});
        rep.witnesses.push_back({x, 0.0, r1});
        rep.witnesses.push_back({x, 1.0, r2});
        rep.witnesses.push_back({x, 2.0, r3});
        rep.note("ratios |f'|/f^{3/4}, |f''|/f^{1/2}, |f'''|/f^{1/4}; bound A+B*max|f''''| = " +
                 fmt_g(bound));
        if (rep.empirical_constant > bound * (1.0 + 1e-9)) {
            rep.passed = false;
            rep.note("ladder ratio exceeds interpolation bound");
        }
        return rep;
    }

    if (fv + tie_tol < x4)
        throw std::invalid_argument("derivative ladder Case1 requires f(x) >= x^4");
    if (fv <= 0.0) {
        rep.empirical_constant = 0.0;
        return rep;
    }
    const double num = std::abs(2.0 * fv * j.deriv(2) - j.deriv(1) * j.deriv(1));
    const double ratio = num / (fv * std::sqrt(fv));
    rep.empirical_constant = ratio;
    rep.witnesses.push_back({x, 0.0, ratio});
    const auto q = quotient_fields(f);
    const double C1 = 1.5 * std::sqrt(q.c2_norm_g);
    const double C2 = 1.5 * std::sqrt(q.c2_norm_h);
    const double bound = 2.0 * C2 * (std::sqrt(C1) + std::sqrt(2.0)) + C1 * C1 + 2.0 * C1;
    rep.note("bound from quotient-field C2 norms = " + fmt_g(bound));
    if (ratio > bound * (1.0 + 1e-9)) {
        rep.passed = false;
        rep.note("|2ff''-(f')^2|/f^{3/2} exceeds the quotient-field bound");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// sup |u_xxx| / ||f||_{C4(2I)}^{1/2} on I minus the zero set, stabilized under
// grid refinement.

inline CertReport third_derivative_constant(const SmoothFn1D& f, Interval I,
                                            int n0 = 2049) {
    CertReport rep;
    rep.name = "third-derivative-constant";
    const Interval W = I.scaled(2.0);
    if (!f.domain.contains(W))
        throw std::invalid_argument("third_derivative_constant: 2I exceeds the domain of f");
    const double norm = ck_norm(f, 4, W);
    const double thr = 1e-13 * (1.0 + ck_norm(f, 0, f.domain, 257));
    const double neg_thr = thr;

    // hypothesis sweep: f >= 0 and x f'(x) >= 0 on 2I
    {
        const int n = 4097;
        const double h = W.length() / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = W.lo + i * h;
            const Jet4 j = f.jets(x);
            if (j.value() < -neg_thr) {
                rep.fail({x, 0.0, j.value()}, "f < 0 on 2I");
                return rep;
            }
            if (x * j.deriv(1) < -1e-9 * (1.0 + norm)) {
                rep.fail({x, 0.0, x * j.deriv(1)}, "x f'(x) >= 0 violated at x=" + fmt_g(x));
                return rep;
            }
        }
    }

    auto sup_at = [&](int n) {
        double s = 0.0;
        const double h = I.length() / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = I.lo + i * h;
            const Jet4 j = f.jets(x);
            if (j.value() < thr) continue;
            s = std::max(s, std::abs(detail::uxxx_magnitude(j)));
        }
        return s;
    };
    const double s0 = sup_at(n0), s1 = sup_at(2 * n0 - 1), s2 = sup_at(4 * n0 - 3);
    rep.grid_params.n = 4 * n0 - 3;
    const double floor_ = 1e-12 * (1.0 + std::sqrt(norm));
    const bool stable = std::abs(s1 - s0) <= 0.05 * (s1 + floor_) &&
                        std::abs(s2 - s1) <= 0.05 * (s2 + floor_);
    rep.empirical_constant = norm > 0.0 ? s2 / std::sqrt(norm) : 0.0;
    rep.note("sup|u_xxx| = " + fmt_g(s2) + ", ||f||_C4(2I) = " + fmt_g(norm));
    if (!stable) rep.fail({0.0, 0.0, s2 - s1}, "sup|u_xxx| did not stabilize under refinement");
    return rep;
}

// ---------------------------------------------------------------------------
// u_xx across the zero point: sqrt(M) with M = f''(0)/2, checked against the
// two-sided Richardson limit of the closed-form u_xx.

inline double extend_uxx_across_zero(const SmoothFn1D& f) {
    const double scale = 1.0 + ck_norm(f, 0, f.domain, 257);
    const Jet4 j0 = f.jets(0.0);
    if (std::abs(j0.value()) > 1e-10 * scale || std::abs(j0.deriv(1)) > 1e-8 * scale)
        throw std::domain_error("extend_uxx_across_zero: requires f(0) = f'(0) = 0");
    const double M = 0.5 * j0.deriv(2);
    if (M < -1e-8 * scale)
        throw std::domain_error("extend_uxx_across_zero: f''(0) < 0 contradicts f >= 0");
    return std::sqrt(std::max(M, 0.0));
}

// Estimate lim_{t->0+} |u_xx|(x0 + side*t) by quadratic polynomial
// extrapolation from t0, t0/2, t0/4 (kills O(t) and O(t^2) error terms).  t0
// must sit inside the asymptotic window: below the curvature scale
// sqrt(M / ||f''''||) when M = f''(x0)/2 > 0.
inline std::optional<double> uxx_one_sided_limit(const SmoothFn1D& f, double x0, double side,
                                                 double t0 = 1e-3) {
    auto val = [&](double t) -> std::optional<double> {
        const double x = x0 + side * t;
        if (!f.domain.contains(x)) return std::nullopt;
        const Jet4 j = f.jets(x);
        if (j.value() <= 0.0) return std::nullopt;
        return std::abs(detail::uxx_magnitude(j));
    };
    const auto v1 = val(t0), v2 = val(0.5 * t0), v3 = val(0.25 * t0);
    if (!v1 || !v2 || !v3) return std::nullopt;
    return *v1 / 3.0 - 2.0 * *v2 + 8.0 / 3.0 * *v3;
}

// Probe step adapted to the local Taylor structure of f at a zero.
inline double uxx_limit_step(const SmoothFn1D& f, double zb) {
    const double M = std::max(0.5 * f.deriv(zb, 2), 0.0);
    double q = 1.0;
    if (f.max_order >= 4)
        for (double t : {0.0, 1e-3, -1e-3})
            if (f.domain.contains(zb + t)) q = std::max(q, std::abs(f.deriv(zb + t, 4)));
    if (M <= 1e-14 * q) return 1e-3;
    return std::clamp(0.5 * std::sqrt(M / q), 1e-6, 1e-3);
}

// ---------------------------------------------------------------------------
// C^{2,1} certification of the lift on I.

enum class C21Mode { ZeroAllowed, StrictlyPositive };

inline CertReport certify_c21_1d(const SmoothFn1D& f, Interval I, C21Mode mode,
                                 int n = kDefaultNormSamples) {
    CertReport rep;
    rep.name = mode == C21Mode::ZeroAllowed ? "c21-1d-zero-allowed" : "c21-1d-positive";
    rep.grid_params.n = n;
    const Interval W = I.scaled(2.0);
    if (!f.domain.contains(W))
        throw std::invalid_argument("certify_c21_1d: 2I exceeds the domain of f");

    const int m = std::min(n, 4097);
    const double norm4 = ck_norm(f, std::min(4, f.max_order), W, m);

    if (mode == C21Mode::StrictlyPositive) {
        double fmin = std::numeric_limits<double>::infinity();
        double xmin = W.lo;
        for (int i = 0; i < m; ++i) {
            const double x = W.lo + W.length() * i / (m - 1);
            const double v = f.eval(x);
            if (v < fmin) {
                fmin = v;
                xmin = x;
            }
        }
        if (!(fmin > 0.0)) {
            rep.fail({xmin, 0.0, fmin}, "positivity violation: min f <= 0 on 2I");
            return rep;
        }
        const double sgn = f.eval(W.hi) >= f.eval(W.lo) ? 1.0 : -1.0;
        // u_xx = sgn * f'/(2 sqrt(f)) >= 0
        Grid1D uxx_grid;
        uxx_grid.interval = I;
        uxx_grid.values.resize(n);
        double sup_uxxx = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = I.lo + I.length() * i / (n - 1);
            const Jet4 j = f.jets(x);
            const double uxx = sgn * detail::uxx_magnitude(j);
            if (uxx < -1e-7 * (1.0 + std::sqrt(norm4)))
                rep.fail({x, 0.0, uxx}, "monotonicity violation: u_xx < 0");
            uxx_grid.values[i] = uxx;
            sup_uxxx = std::max(sup_uxxx, std::abs(detail::uxxx_magnitude(j)));
        }
        rep.empirical_constant = lipschitz_seminorm(uxx_grid);
        rep.note("sup|u_xxx| on I = " + fmt_g(sup_uxxx));
        rep.note("min f on 2I = " + fmt_g(fmin));
        return rep;
    }

    // zero-allowed: Theorem-style composition
    {
        for (int i = 0; i < m; ++i) {
            const double x = W.lo + W.length() * i / (m - 1);
            if (x * f.deriv(x, 1) < -1e-9 * (1.0 + norm4)) {
                rep.fail({x, 0.0, x * f.deriv(x, 1)},
                         "monotonicity violation: x f'(x) < 0 at x=" + fmt_g(x));
                return rep;
            }
        }
    }
    SqrtLift L = lift(f, SignConvention::OddAboutZero, std::max(2 * m - 1, 2049));
    if (L.zero_set.empty() && f.eval(0.0) > L.zero_threshold) {
        rep.note("f has no zero set on the domain; delegating to the strictly-positive route");
        CertReport inner = certify_c21_1d(f, I, C21Mode::StrictlyPositive, n);
        inner.name = rep.name;
        for (const auto& s : rep.notes) inner.notes.push_back(s);
        return inner;
    }

    // Boundary extension values at every zero-set component inside W.
    auto true_zero_edge = [&](double inside, double outside) {
        // bisect on the predicate f(x) == 0 between a true zero and a positive sample
        double a = inside, b = outside;
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (a + b);
            if (f.eval(m) <= 0.0)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    };
    for (const auto& z : L.zero_set) {
        if (z.hi < W.lo || z.lo > W.hi) continue;
        double zlo = z.lo, zhi = z.hi;
        const double mid = 0.5 * (z.lo + z.hi);
        // look for a genuine (double-exact) zero inside the component
        double inside = mid;
        bool has_true_zero = f.eval(mid) <= 0.0;
        for (int i = 0; i <= 64 && !has_true_zero; ++i) {
            const double t = z.lo + z.length() * i / 64.0;
            if (f.eval(t) <= 0.0) {
                inside = t;
                has_true_zero = true;
            }
        }
        if (has_true_zero) {
            zlo = true_zero_edge(inside, z.lo);
            zhi = true_zero_edge(inside, z.hi);
        } else {
            // pseudo-zero: f dips below the threshold but not to zero; take the f' root
            double a = z.lo, b = z.hi;
            for (int it = 0; it < 100; ++it) {
                const double m2 = 0.5 * (a + b);
                if (f.deriv(m2, 1) <= 0.0)
                    a = m2;
                else
                    b = m2;
            }
            zlo = zhi = 0.5 * (a + b);
            rep.note("pseudo-zero component near x=" + fmt_g(zlo) +
                     " (f stays positive); extension value is approximate");
        }
        for (const double zb : {zlo, zhi}) {
            const double M = 0.5 * f.deriv(zb, 2);
            const double val = std::sqrt(std::max(M, 0.0));
            rep.witnesses.push_back({zb, 0.0, val});
            // one-sided numerical limit from outside the component
            const double side = (zb <= mid) ? -1.0 : 1.0;
            const double room = side < 0 ? zb - W.lo : W.hi - zb;
            const double t0 = uxx_limit_step(f, zb);
            if (room > 4.0 * t0) {
                if (auto lim = uxx_one_sided_limit(f, zb, side, t0)) {
                    if (std::abs(*lim - val) > 1e-4 * (1.0 + val)) {
                        rep.passed = false;
                        rep.note("extension value " + fmt_g(val) +
                                 " disagrees with one-sided limit " + fmt_g(*lim) +
                                 " at x=" + fmt_g(zb));
                    }
                }
            }
            if (zhi == zlo) break;
        }
    }

    // u_xx grid and Lipschitz seminorm; formula where f > 0, extension where f = 0.
    Grid1D uxx_grid;
    uxx_grid.interval = I;
    uxx_grid.values.resize(n);
    double sup_uxxx = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = I.lo + I.length() * i / (n - 1);
        const double uxx = L.uxx_or_extension(x);
        if (uxx < -1e-7 * (1.0 + std::sqrt(norm4)))
            rep.fail({x, 0.0, uxx}, "u_xx < 0 off the zero set");
        uxx_grid.values[i] = uxx;
        const Jet4 j = f.jets(x);
        if (j.value() >= L.zero_threshold)
            sup_uxxx = std::max(sup_uxxx, std::abs(detail::uxxx_magnitude(j)));
    }
    rep.empirical_constant = lipschitz_seminorm(uxx_grid);
    rep.note("sup|u_xxx| on I (off zero set) = " + fmt_g(sup_uxxx));
    return rep;
}

// ---------------------------------------------------------------------------
// Scaled bound: |u_xxx| <= C s^{-3} ||u_x^2||_{C4(2sI)}^{1/2} on sI, checked by
// two routes (direct sweep vs rescale to the unit interval).

inline CertReport scaled_bound_check(const SmoothFn1D& f, double s, int n = 4097) {
    if (!(s > 0.0) || !(s < 1.0))
        throw std::invalid_argument("scaled_bound_check: s must lie in (0,1)");
    CertReport rep;
    rep.name = "scaled-bound";
    rep.grid_params.n = n;
    const Interval I1(-1.0, 1.0);
    const Interval sI(-s, s), s2I(-2.0 * s, 2.0 * s);
    if (!f.domain.contains(s2I))
        throw std::invalid_argument("scaled_bound_check: 2sI exceeds the domain of f");

    const double thr = 1e-13 * (1.0 + ck_norm(f, 0, f.domain, 257));
    auto sup_direct = [&]() {
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sI.lo + sI.length() * i / (n - 1);
            const Jet4 j = f.jets(x);
            if (j.value() < thr) continue;
            m = std::max(m, std::abs(detail::uxxx_magnitude(j)));
        }
        return m;
    };
    const double supA = sup_direct();

    // route B: fbar(x) = s^2 f(sx) on the unit interval
    SmoothFn1D fbar = scale_output(rescale(f, 1.0 / s), s * s);
    const double thr_b = 1e-13 * (1.0 + ck_norm(fbar, 0, I1.scaled(2.0), 257));
    double supB = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = I1.lo + I1.length() * i / (n - 1);
        const Jet4 j = fbar.jets(x);
        if (j.value() < thr_b) continue;
        supB = std::max(supB, std::abs(detail::uxxx_magnitude(j)));
    }
    const double supB_mapped = supB / (s * s * s);
    const double route_diff = std::abs(supA - supB_mapped);
    if (route_diff > 1e-8 * (1.0 + supA))
        rep.fail({0.0, 0.0, route_diff}, "direct and rescaled routes disagree");

    CertReport unit = third_derivative_constant(fbar, I1);
    const double C = unit.empirical_constant;
    const double norm_s = ck_norm(f, 4, s2I);
    const double bound = C / (s * s * s) * std::sqrt(norm_s);
    rep.empirical_constant = supA;
    rep.note("routes: direct = " + fmt_g(supA) + ", rescaled = " + fmt_g(supB_mapped));
    rep.note("scaled bound C s^-3 ||f||^{1/2} = " + fmt_g(bound) +
             " (C = " + fmt_g(C) + ")");
    if (supA > bound * (1.0 + 1e-9) + 1e-12) {
        rep.passed = false;
        rep.note("scaled inequality violated");
    } else {
        rep.note("slack = " + fmt_g(bound - supA));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Nondegenerate Taylor values at 0 for u_x = x sqrt(M + R(x) x), M > 0:
// (u''(0), u'''(0), u''''(0)) in closed form, cross-checked against
// Richardson-extrapolated central differences of u_x.

struct TaylorValues {
    double d2 = 0.0, d3 = 0.0, d4 = 0.0;
    double fd2 = 0.0, fd3 = 0.0, fd4 = 0.0;  // finite-difference cross-check
    double max_deviation = 0.0;
};

inline TaylorValues nondegenerate_taylor(double M, const SmoothFn1D& R) {
    if (!(M > 0.0)) throw std::invalid_argument("nondegenerate_taylor: M must be > 0");
    TaylorValues tv;
    const double R0 = R.eval(0.0), R1 = R.deriv(0.0, 1);
    const double sM = std::sqrt(M);
    tv.d2 = sM;
    tv.d3 = R0 / sM;
    tv.d4 = (12.0 * R1 * M - 3.0 * R0 * R0) / (4.0 * M * sM);

    double supR = 1.0;
    const double probe = std::min(0.2, 0.45 * std::min(-R.domain.lo, R.domain.hi));
    for (int i = 0; i <= 64; ++i) {
        const double x = -probe + 2.0 * probe * i / 64.0;
        supR = std::max(supR, std::abs(R.eval(x)));
    }
    const double h0 = std::min({0.05, 0.1 * M / supR, 0.45 * probe});
    auto ux = [&](double x) { return x * std::sqrt(M + R.eval(x) * x); };
    auto rich2 = [&](int order, double h) {
        const double d1 = central_diff(ux, 0.0, order, h);
        const double d2 = central_diff(ux, 0.0, order, 0.5 * h);
        const double d3 = central_diff(ux, 0.0, order, 0.25 * h);
        const double r1 = (4.0 * d2 - d1) / 3.0;
        const double r2 = (4.0 * d3 - d2) / 3.0;
        return (16.0 * r2 - r1) / 15.0;
    };
    tv.fd2 = rich2(1, h0);
    tv.fd3 = rich2(2, h0);
    tv.fd4 = rich2(3, h0);
    tv.max_deviation = std::max({std::abs(tv.fd2 - tv.d2), std::abs(tv.fd3 - tv.d3),
                                 std::abs(tv.fd4 - tv.d4)});
    return tv;
}

}  // namespace macert::lift1d
