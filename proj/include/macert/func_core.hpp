#pragma once

// Core 1D vocabulary: smooth functions with derivative oracles, uniform grids,
// central finite differences, sup-norms over derivative orders, Lipschitz
// seminorms, rescaling, and log-log power-law fits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "macert/interval.hpp"
#include "macert/jet.hpp"

namespace macert {

// A real function on an interval with exact derivatives up to max_order,
// supplied as a jet oracle.  max_order < 4 marks functions that are only
// C^max_order (their higher jet slots are not trustworthy).
struct SmoothFn1D {
    Interval domain{-1.0, 1.0};
    std::function<Jet4(double)> jet;
    int max_order = 4;

    SmoothFn1D() = default;
    SmoothFn1D(Interval dom, std::function<Jet4(double)> j, int max_ord = 4)
        : domain(dom), jet(std::move(j)), max_order(max_ord) {}

    double eval(double x) const { return jet(x).value(); }

    double deriv(double x, int order) const {
        if (order < 0 || order > max_order)
            throw std::invalid_argument("SmoothFn1D::deriv: order out of range");
        if (order == 0) return eval(x);
        return jet(x).deriv(order);
    }

    Jet4 jets(double x) const { return jet(x); }
};

// Convenience: build a SmoothFn1D from a generic jet-evaluable expression.
template <typename F>
SmoothFn1D make_smooth_fn(Interval dom, F&& expr, int max_ord = 4) {
    return SmoothFn1D(dom, [e = std::forward<F>(expr)](double x) { return e(Jet4::variable(x)); },
                      max_ord);
}

// ---------------------------------------------------------------------------

struct Grid1D {
    Interval interval{-1.0, 1.0};
    std::vector<double> values;
    int margin = 0;  // samples within margin of either end are not valid

    int n() const { return static_cast<int>(values.size()); }
    double h() const { return interval.length() / (n() - 1); }
    double x(int i) const { return interval.lo + i * h(); }
    bool valid(int i) const { return i >= margin && i < n() - margin; }
};

template <typename F>
Grid1D sample_grid(const F& fn, Interval I, int n) {
    if (n < 3) throw std::invalid_argument("sample_grid: need n >= 3");
    Grid1D g;
    g.interval = I;
    g.values.resize(n);
    const double h = I.length() / (n - 1);
    for (int i = 0; i < n; ++i) g.values[i] = fn(I.lo + i * h);
    return g;
}

inline Grid1D sample_grid(const SmoothFn1D& f, Interval I, int n) {
    if (!f.domain.contains(I)) throw std::invalid_argument("sample_grid: interval outside domain");
    return sample_grid([&](double x) { return f.eval(x); }, I, n);
}

// Central finite differences of order j in {1,2,3}, second-order accurate.
// Entries inside the widened margin are NaN and marked invalid.
inline Grid1D finite_diff(const Grid1D& g, int order) {
    if (order < 1 || order > 3) throw std::invalid_argument("finite_diff: order must be 1..3");
    const int radius = (order <= 2) ? 1 : 2;
    if (g.n() - 2 * g.margin < 2 * radius + 1)
        throw std::invalid_argument("finite_diff: grid too small for stencil");
    Grid1D out;
    out.interval = g.interval;
    out.margin = g.margin + radius;
    out.values.assign(g.n(), std::numeric_limits<double>::quiet_NaN());
    const double h = g.h();
    const auto& v = g.values;
    for (int i = out.margin; i < g.n() - out.margin; ++i) {
        switch (order) {
            case 1: out.values[i] = (v[i + 1] - v[i - 1]) / (2.0 * h); break;
            case 2: out.values[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h); break;
            case 3:
                out.values[i] =
                    (v[i + 2] - 2.0 * v[i + 1] + 2.0 * v[i - 1] - v[i - 2]) / (2.0 * h * h * h);
                break;
        }
    }
    return out;
}

// Pointwise central difference of a callable, orders 1..4, O(h^2).
template <typename F>
double central_diff(const F& f, double x, int order, double h) {
    switch (order) {
        case 1: return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3:
            return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
                   (2.0 * h * h * h);
        case 4:
            return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) /
                   (h * h * h * h);
        default: throw std::invalid_argument("central_diff: order must be 1..4");
    }
}

// Richardson-extrapolated central difference: O(h^4).
template <typename F>
double central_diff_richardson(const F& f, double x, int order, double h) {
    const double d1 = central_diff(f, x, order, h);
    const double d2 = central_diff(f, x, order, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

// ---------------------------------------------------------------------------

constexpr int kDefaultNormSamples = 8193;

// max over derivative orders 0..k of the sampled sup-norm on I.
inline double ck_norm(const SmoothFn1D& f, int k, Interval I, int n = kDefaultNormSamples) {
    if (k < 0 || k > f.max_order) throw std::invalid_argument("ck_norm: order out of range");
    if (!f.domain.contains(I)) throw std::invalid_argument("ck_norm: interval outside domain");
    double m = 0.0;
    const double h = I.length() / (n - 1);
    for (int i = 0; i < n; ++i) {
        const Jet4 j = f.jets(I.lo + i * h);
        for (int d = 0; d <= k; ++d) m = std::max(m, std::abs(j.deriv(d)));
    }
    return m;
}

// max over adjacent valid samples of |dv|/h.  Pairs straddling invalid or NaN
// entries are skipped.
inline double lipschitz_seminorm(const Grid1D& g) {
    if (g.n() - 2 * g.margin < 2)
        throw std::invalid_argument("lipschitz_seminorm: fewer than two valid samples");
    double m = 0.0;
    const double h = g.h();
    for (int i = g.margin; i + 1 < g.n() - g.margin; ++i) {
        const double a = g.values[i], b = g.values[i + 1];
        if (std::isnan(a) || std::isnan(b)) continue;
        m = std::max(m, std::abs(b - a) / h);
    }
    return m;
}

// u-bar(x) = u(x/s); derivatives scale by s^-j, domain by s.
inline SmoothFn1D rescale(const SmoothFn1D& u, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("rescale: s must be > 0");
    SmoothFn1D r;
    r.domain = Interval(u.domain.lo * s, u.domain.hi * s);
    r.max_order = u.max_order;
    r.jet = [u, s](double x) {
        Jet4 j = u.jet(x / s);
        double p = 1.0;
        for (int k = 1; k <= 4; ++k) {
            p /= s;
            j.a[k] *= p;
        }
        return j;
    };
    return r;
}

// g(t) = f(x0 + t).
inline SmoothFn1D translate(const SmoothFn1D& f, double x0) {
    return SmoothFn1D(Interval(f.domain.lo - x0, f.domain.hi - x0),
                      [f, x0](double t) { return f.jet(x0 + t); }, f.max_order);
}

// Pointwise scalar multiple c*f.
inline SmoothFn1D scale_output(const SmoothFn1D& f, double c) {
    SmoothFn1D r = f;
    r.jet = [f, c](double x) {
        Jet4 j = f.jet(x);
        return j * c;
    };
    return r;
}

// ---------------------------------------------------------------------------

struct PowerFit {
    double exponent = 0.0;
    double coefficient = 0.0;
    double r_squared = 0.0;
};

// Least-squares line in log-log coordinates; exponent is the slope.
inline PowerFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4) throw std::invalid_argument("fit_power_law: need at least 4 points");
    double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
    for (const auto& [s, v] : points) {
        if (!(s > 0.0) || !(v > 0.0))
            throw std::invalid_argument("fit_power_law: inputs must be positive");
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    // nominally one decade; 8x is accepted so dyadic scale ladders with four
    // rungs (s, s/2, s/4, s/8) qualify
    if (smax / smin < 8.0 * (1.0 - 1e-12))
        throw std::invalid_argument("fit_power_law: scales must span at least one decade");

    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [s, v] : points) {
        const double lx = std::log(s), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw std::invalid_argument("fit_power_law: degenerate span");
    PowerFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [s, v] : points) {
        const double pred = std::log(fit.coefficient) + fit.exponent * std::log(s);
        const double e = std::log(v) - pred;
        ss_res += e * e;
    }
    fit.r_squared = (ss_tot <= 0.0) ? 1.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
    return fit;
}

}  // namespace macert
