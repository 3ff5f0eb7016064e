#pragma once

// Closed-form example and counterexample families, each with exact derivative
// oracles.  Declared traits are re-verified on a grid at construction;
// construction throws on any mismatch.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "macert/field2d.hpp"
#include "macert/func_core.hpp"
#include "macert/report.hpp"

namespace macert::gallery {

enum class Trait { Nonneg, XFprimeNonneg, Convex, InfiniteOrderFlat, NonC3, NonConvex2D };

struct FamilySpec {
    std::string name;
    std::map<std::string, double> parameters;
    std::optional<SmoothFn1D> fn1d;  // f = u_x^2, the function handed to the lift
    std::optional<Field2D> fn2d;     // the 2D graph u(x, y) where the family has one
    std::set<Trait> traits;
    std::vector<double> kinks1d;  // oracle switch points to avoid in rate tests
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("gallery trait verification failed: " + what);
}

inline void verify_traits(const FamilySpec& s, int n = 4096) {
    const auto has = [&](Trait t) { return s.traits.count(t) > 0; };
    if (s.fn1d) {
        const auto& f = *s.fn1d;
        const double scale = 1.0 + ck_norm(f, 0, f.domain, 1025);
        const double h = f.domain.length() / n;
        if (has(Trait::Nonneg)) {
            for (int i = 0; i <= n; ++i) {
                const double x = f.domain.lo + i * h;
                require(f.eval(x) >= -1e-12 * scale, s.name + ": f >= 0");
            }
        }
        if (has(Trait::XFprimeNonneg)) {
            for (int i = 0; i <= n; ++i) {
                const double x = f.domain.lo + i * h;
                require(x * f.deriv(x, 1) >= -1e-9 * scale, s.name + ": x f'(x) >= 0");
            }
        }
        if (has(Trait::InfiniteOrderFlat)) {
            require(f.eval(0.1) < std::pow(0.1, 40.0), s.name + ": flat at order 40 (x=0.1)");
            require(f.eval(0.05) < std::pow(0.05, 40.0), s.name + ": flat at order 40 (x=0.05)");
        }
    }
    if (s.fn2d) {
        const auto& u = *s.fn2d;
        if (has(Trait::Convex)) {
            // sampled second differences along x, y and both diagonals
            const int m = 64;
            const double hx = u.xdom.length() / m, hy = u.ydom.length() / m;
            const double step = 0.25 * std::min(hx, hy);
            double scale = 1.0;
            for (int j = 1; j < m; ++j)
                for (int i = 1; i < m; ++i) {
                    const double x = u.xdom.lo + i * hx + 0.37 * step;
                    const double y = u.ydom.lo + j * hy + 0.21 * step;
                    if (!u.in_domain(x - 2 * step, y - 2 * step) ||
                        !u.in_domain(x + 2 * step, y + 2 * step))
                        continue;
                    scale = std::max(scale, std::abs(u.eval(x, y)));
                    for (auto [dx, dy] : {std::pair{1.0, 0.0}, {0.0, 1.0},
                                          {M_SQRT1_2, M_SQRT1_2}, {M_SQRT1_2, -M_SQRT1_2}}) {
                        const double dd = u.eval(x + dx * step, y + dy * step) -
                                          2.0 * u.eval(x, y) +
                                          u.eval(x - dx * step, y - dy * step);
                        require(dd >= -1e-7 * scale * step, s.name + ": convexity");
                    }
                }
        }
        if (has(Trait::NonConvex2D)) {
            // must exhibit a genuinely negative directional second difference
            double worst = 0.0;
            const double step = 1e-3;
            for (int i = 0; i <= 64; ++i) {
                const double x = -0.5 + i / 64.0;
                const double dd =
                    (u.eval(x + step, 1.0) - 2.0 * u.eval(x, 1.0) + u.eval(x - step, 1.0)) /
                    (step * step);
                worst = std::min(worst, dd);
            }
            require(worst < -0.5, s.name + ": non-convexity witness");
        }
    }
}

}  // namespace detail

// --------------------------------------------------------------------------
// u = |x|^p in 1D (f = p^2 |x|^{2p-2}) and u = r^p in 2D.

inline SmoothFn1D cusp_f_fn(double p, Interval I = {-4.0, 4.0}) {
    const double q = 2.0 * p - 2.0;
    const bool integer_q = std::abs(q - std::round(q)) < 1e-12;
    return SmoothFn1D(
        I,
        [p, q, integer_q](double x) -> Jet4 {
            const double c = p * p;
            if (integer_q) {
                const int iq = static_cast<int>(std::round(q));
                Jet4 j = Jet4::constant(c);
                Jet4 xv = Jet4::variable(std::abs(x));
                for (int k = 0; k < iq; ++k) j = j * xv;
                if (x < 0.0)  // |x|^q jets: odd-order derivatives flip sign
                    for (int k = 1; k <= 4; k += 2) j.a[k] = -j.a[k];
                return j;
            }
            if (x == 0.0) return Jet4::constant(0.0);
            Jet4 j = c * pow(Jet4::variable(std::abs(x)), q);
            if (x < 0.0)
                for (int k = 1; k <= 4; k += 2) j.a[k] = -j.a[k];
            return j;
        },
        4);
}

inline Field2D cusp_surface(double p, Interval xdom = {-1.0, 1.0}, Interval ydom = {-1.0, 1.0}) {
    return make_radial_field(xdom, ydom, [p](double r) {
        if (r <= 0.0) return Jet5::constant(0.0);  // r^p -> 0 for p >= 2
        return pow(Jet5::variable(r), p);
    });
}

inline FamilySpec make_cusp_power(double p) {
    if (!(p >= 2.0)) throw std::invalid_argument("make_cusp_power: requires p >= 2");
    FamilySpec s;
    s.name = "cusp";
    s.parameters["p"] = p;
    s.fn1d = cusp_f_fn(p);
    s.fn2d = cusp_surface(p);
    s.traits = {Trait::Nonneg, Trait::XFprimeNonneg, Trait::Convex};
    if (std::abs(2.0 * p - 2.0 - std::round(2.0 * p - 2.0)) > 1e-12) s.kinks1d.push_back(0.0);
    detail::verify_traits(s);
    return s;
}

// --------------------------------------------------------------------------
// The flat oscillatory necessity witness f = e^{-1/x^2} sin^2(1/x) + e^{-2/x^2}.
// Below |x| < 0.02 the oracle returns the exact limit 0 (1/x^2 overflows the
// exponential range there).

constexpr double kOscCutoff = 0.02;

inline SmoothFn1D oscillatory_f_fn(Interval I = {-4.0, 4.0}) {
    return SmoothFn1D(
        I,
        [](double x) -> Jet4 {
            if (std::abs(x) < kOscCutoff) return Jet4::constant(0.0);
            const Jet4 xj = Jet4::variable(x);
            const Jet4 inv2 = recip(xj * xj);
            const Jet4 E = exp(-inv2);
            const Jet4 S = sin(recip(xj));
            return E * S * S + E * E;
        },
        4);
}

// sqrt(f) for the oscillatory family, evaluated in the E-factored form
// e^{-1/(2x^2)} sqrt(sin^2 + e^{-1/x^2}) which stays representable wherever
// the value itself is.
inline SmoothFn1D oscillatory_sqrtf_fn(Interval I = {-4.0, 4.0}) {
    return SmoothFn1D(
        I,
        [](double x) -> Jet4 {
            if (std::abs(x) < kOscCutoff) return Jet4::constant(0.0);
            const Jet4 xj = Jet4::variable(x);
            const Jet4 inv2 = recip(xj * xj);
            const Jet4 Eh = exp(-0.5 * inv2);
            const Jet4 S = sin(recip(xj));
            const Jet4 G = S * S + exp(-inv2);
            if (G.value() <= 0.0) return Jet4::constant(0.0);
            return Eh * sqrt(G);
        },
        2);
}

// (sqrt f)'' with the common exponential factor cancelled analytically:
// numerically stable for every |x| >= the cutoff.  At a sin zero this equals
// x^-4 + (4 x^-6 - 6 x^-4) e^{-1/x^2}.
inline double oscillatory_sqrtf_dd(double x) {
    if (std::abs(x) < kOscCutoff) return 0.0;
    const Jet4 xj = Jet4::variable(x);
    const Jet4 S = sin(recip(xj));
    const Jet4 Ej = exp(-recip(xj * xj));
    const Jet4 G = S * S + Ej;
    const double g = G.value(), g1 = G.deriv(1), g2 = G.deriv(2);
    if (g <= 0.0) return 0.0;
    const double x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x6 = x4 * x2;
    const double Ntil = (4.0 / x6 - 12.0 / x4) * g * g + (4.0 / x3) * g * g1 +
                        (2.0 * g * g2 - g1 * g1);
    const double Eh = std::exp(-0.5 / x2);
    return Eh * Ntil / (4.0 * g * std::sqrt(g));
}

// Value of (sqrt f)'' at the k-th zero of sin(1/x), x_k = 1/(k pi), where the
// analytic cancellation is exact.
inline double oscillatory_sqrtf_dd_at_sin_zero(int k) {
    const double x = 1.0 / (k * M_PI);
    const double x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
    const double ex = 1.0 / x2 < 700.0 ? std::exp(-1.0 / x2) : 0.0;
    return 1.0 / x4 + (4.0 / x6 - 6.0 / x4) * ex;
}

inline FamilySpec make_oscillatory() {
    FamilySpec s;
    s.name = "oscillatory";
    s.fn1d = oscillatory_f_fn();
    s.traits = {Trait::Nonneg, Trait::InfiniteOrderFlat};
    s.kinks1d = {-kOscCutoff, kOscCutoff};
    detail::verify_traits(s);
    return s;
}

// --------------------------------------------------------------------------
// The cusp-smoothing family u_s = (x^2+s^2)^{3/2}, f = 9 s^2 x^2 + 9 x^4.

inline SmoothFn1D us_f_fn(double s, Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [s](Jet4 x) {
        const Jet4 x2 = x * x;
        return 9.0 * s * s * x2 + 9.0 * x2 * x2;
    });
}

inline SmoothFn1D us_u_fn(double s, Interval I = {-4.0, 4.0}) {
    return make_smooth_fn(I, [s](Jet4 x) { return pow(x * x + s * s, 1.5); });
}

inline Field2D us_surface(double s, Interval xdom = {-1.0, 1.0}, Interval ydom = {-1.0, 1.0}) {
    return make_field(xdom, ydom, [s](const Jet5& x, const Jet5& y) {
        return pow(x * x + y * y + s * s, 1.5);
    });
}

inline FamilySpec make_us_family(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("make_us_family: requires s > 0");
    FamilySpec spec;
    spec.name = "us";
    spec.parameters["s"] = s;
    spec.fn1d = us_f_fn(s);
    spec.fn2d = us_surface(s);
    spec.traits = {Trait::Nonneg, Trait::XFprimeNonneg, Trait::Convex, Trait::NonC3};
    detail::verify_traits(spec);
    // NonC3 probe: the C^3 modulus u''''(0) = 9/s diverges as s -> 0
    const double d4 = us_u_fn(s).deriv(0.0, 4);
    detail::require(std::abs(d4 - 9.0 / s) <= 1e-6 * (9.0 / s),
                    "us: u''''(0) = 9/s probe");
    return spec;
}

// --------------------------------------------------------------------------
// The non-convex 2D example u = sign(x) (x^2 + |x| y^2) = x|x| + x y^2.

inline Field2D nonconvex_surface(Interval xdom = {-1.0, 1.0}, Interval ydom = {-1.5, 1.5}) {
    Field2D f;
    f.xdom = xdom;
    f.ydom = ydom;
    f.eval_fn = [](double x, double y) { return x * std::abs(x) + x * y * y; };
    f.jet_fn = [](const Jet5& x, const Jet5& y) {
        // per-side polynomial: x^2 + x y^2 for x >= 0, -x^2 + x y^2 for x < 0
        const double sgn = x.value() < 0.0 ? -1.0 : 1.0;
        return sgn * (x * x) + x * (y * y);
    };
    f.partial_fn = [](double x, double y, int i, int j) -> double {
        const double sgn = x < 0.0 ? -1.0 : 1.0;
        // u = sgn x^2 + x y^2 on each side
        static const auto fail = [] {
            throw std::invalid_argument("nonconvex surface: partial order out of range");
            return 0.0;
        };
        if (i == 0 && j == 0) return sgn * x * x + x * y * y;
        if (i == 1 && j == 0) return 2.0 * sgn * x + y * y;
        if (i == 0 && j == 1) return 2.0 * x * y;
        if (i == 2 && j == 0) return 2.0 * sgn;
        if (i == 1 && j == 1) return 2.0 * y;
        if (i == 0 && j == 2) return 2.0 * x;
        if (i + j == 3) {
            if (i == 2 && j == 1) return 0.0;
            if (i == 1 && j == 2) return 2.0;
            return 0.0;
        }
        return fail();
    };
    f.max_partial_order = 3;
    return f;
}

// f = u_x^2 = (2|x| + y^2)^2 for the non-convex example.
inline Field2D nonconvex_ux2_field(Interval xdom = {-1.0, 1.0}, Interval ydom = {-1.5, 1.5}) {
    return make_field(xdom, ydom, [](const Jet5& x, const Jet5& y) {
        const double sgn = x.value() < 0.0 ? -1.0 : 1.0;
        const Jet5 w = sgn * 2.0 * x + y * y;
        return w * w;
    });
}

inline FamilySpec make_nonconvex_2d() {
    FamilySpec s;
    s.name = "nonconvex2d";
    s.fn2d = nonconvex_surface();
    s.traits = {Trait::NonConvex2D};
    detail::verify_traits(s);
    return s;
}

// --------------------------------------------------------------------------
// The plateau family: f = 0 on [-a, a], quartic contact outside.

inline SmoothFn1D plateau_f_fn(double a, Interval I = {-4.0, 4.0}) {
    return SmoothFn1D(
        I,
        [a](double x) -> Jet4 {
            if (x > a) {
                const Jet4 t = Jet4::variable(x) - a;
                const Jet4 t2 = t * t;
                return t2 * t2;
            }
            if (x < -a) {
                const Jet4 t = Jet4::variable(x) + a;
                const Jet4 t2 = t * t;
                return t2 * t2;
            }
            return Jet4::constant(0.0);
        },
        4);
}

inline FamilySpec make_plateau(double a) {
    if (!(a > 0.0) || !(a < 0.5)) throw std::invalid_argument("make_plateau: requires 0 < a < 1/2");
    FamilySpec s;
    s.name = "plateau";
    s.parameters["a"] = a;
    s.fn1d = plateau_f_fn(a);
    s.traits = {Trait::Nonneg, Trait::XFprimeNonneg};
    s.kinks1d = {-a, a};
    detail::verify_traits(s);
    return s;
}

// --------------------------------------------------------------------------
// Cantor-function iterates: C_0(x) = x, C_{n+1} by the middle-thirds rule.
// Piecewise linear, exact evaluation; max slope (3/2)^depth.

inline double cantor_eval(int depth, double x) {
    x = std::clamp(x, 0.0, 1.0);
    double lo = 0.0, scale = 1.0;  // value = lo + scale * C_{remaining}(x)
    for (int d = 0; d < depth; ++d) {
        if (x < 1.0 / 3.0) {
            x *= 3.0;
            scale *= 0.5;
        } else if (x <= 2.0 / 3.0) {
            return lo + scale * 0.5;
        } else {
            x = 3.0 * x - 2.0;
            lo += scale * 0.5;
            scale *= 0.5;
        }
    }
    return lo + scale * x;
}

inline FamilySpec make_cantor(int depth) {
    if (depth < 1 || depth > 25) throw std::invalid_argument("make_cantor: depth must be in 1..25");
    FamilySpec s;
    s.name = "cantor";
    s.parameters["depth"] = depth;
    s.fn1d = SmoothFn1D(
        Interval(0.0, 1.0),
        [depth](double x) { return Jet4::constant(cantor_eval(depth, x)); }, 0);
    s.traits = {Trait::Nonneg};
    detail::verify_traits(s);
    return s;
}

// --------------------------------------------------------------------------
// Degeneracy envelope check: (1/A)(x^{2n} + B y^{2m}) <= k <= A (x^{2n} + B y^{2m}).

inline CertReport check_envelope(const Field2D& k, double A, double B, int n, int m,
                                 int grid = 129) {
    if (!(A > 0.0) || B < 0.0 || n < 1 || m < n)
        throw std::invalid_argument("check_envelope: requires A > 0, B >= 0, 1 <= n <= m");
    CertReport rep;
    rep.name = "degeneracy-envelope";
    rep.grid_params.nx = grid;
    rep.grid_params.ny = grid;
    double scale = 1e-12;
    for (int j = 0; j < grid; ++j)
        for (int i = 0; i < grid; ++i) {
            const double x = k.xdom.lo + k.xdom.length() * i / (grid - 1);
            const double y = k.ydom.lo + k.ydom.length() * j / (grid - 1);
            scale = std::max(scale, std::abs(k.eval(x, y)));
        }
    const double tol = 1e-10 * scale;
    for (int j = 0; j < grid; ++j)
        for (int i = 0; i < grid; ++i) {
            const double x = k.xdom.lo + k.xdom.length() * i / (grid - 1);
            const double y = k.ydom.lo + k.ydom.length() * j / (grid - 1);
            const double env = std::pow(x, 2 * n) + B * std::pow(y, 2 * m);
            const double v = k.eval(x, y);
            if (v < env / A - tol) rep.fail({x, y, v - env / A}, "lower envelope violated");
            if (v > A * env + tol) rep.fail({x, y, v - A * env}, "upper envelope violated");
        }
    rep.empirical_constant = A;
    return rep;
}

// --------------------------------------------------------------------------
// Registry (CLI addressing: name plus key=value parameters).

inline FamilySpec make_family(const std::string& name,
                              const std::map<std::string, double>& params = {}) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "cusp") return make_cusp_power(get("p", 3.0));
    if (name == "oscillatory") return make_oscillatory();
    if (name == "us") return make_us_family(get("s", 0.1));
    if (name == "nonconvex2d") return make_nonconvex_2d();
    if (name == "plateau") return make_plateau(get("a", 0.3));
    if (name == "cantor") return make_cantor(static_cast<int>(get("depth", 6.0)));
    throw std::invalid_argument("unknown family: " + name);
}

inline std::vector<std::pair<std::string, std::string>> list_families() {
    return {
        {"cusp", "u = |x|^p / r^p cusp powers (p >= 2, default p=3: f = 9x^4)"},
        {"oscillatory", "flat oscillatory necessity witness e^{-1/x^2} sin^2(1/x) + e^{-2/x^2}"},
        {"us", "cusp smoothing u_s = (x^2+s^2)^{3/2} (s > 0)"},
        {"nonconvex2d", "sign(x)(x^2 + |x| y^2), convexity counterexample"},
        {"plateau", "f = 0 on [-a,a] with quartic contact (0 < a < 1/2)"},
        {"cantor", "Cantor-function iterate on [0,1] (depth 1..25)"},
    };
}

}  // namespace macert::gallery
