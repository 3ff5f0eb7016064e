#pragma once

// Graph-surface machinery: induced metric, Hessian determinant and Gauss
// curvature, directional derivative squares, mixed-third-derivative recovery
// from four directions, touch curves with boundary conventions, and mollifier
// convolution with derivative-bound bookkeeping.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "macert/field2d.hpp"
#include "macert/quadrature.hpp"
#include "macert/report.hpp"

namespace macert::surface {

// --------------------------------------------------------------------------
// Induced metric of the graph (x, y) -> (x, y, u): g = dx^2 + dy^2 + du^2.

struct MetricField {
    Field2D gxx, gxy, gyy;
};

inline MetricField induced_metric(const Field2D& u) {
    MetricField m;
    for (Field2D* g : {&m.gxx, &m.gxy, &m.gyy}) {
        g->xdom = u.xdom;
        g->ydom = u.ydom;
    }
    m.gxx.eval_fn = [u](double x, double y) {
        const double ux = u.partial(x, y, 1, 0);
        return 1.0 + ux * ux;
    };
    m.gxy.eval_fn = [u](double x, double y) {
        return u.partial(x, y, 1, 0) * u.partial(x, y, 0, 1);
    };
    m.gyy.eval_fn = [u](double x, double y) {
        const double uy = u.partial(x, y, 0, 1);
        return 1.0 + uy * uy;
    };
    return m;
}

// --------------------------------------------------------------------------
// f_z = (l u_x + m u_y)^2 for a unit direction (l, m).

inline Field2D directional_square(const Field2D& u, double l, double m) {
    if (std::abs(l * l + m * m - 1.0) > 1e-10)
        throw std::invalid_argument("directional_square: direction must be a unit vector");
    Field2D f;
    f.xdom = u.xdom;
    f.ydom = u.ydom;
    f.eval_fn = [u, l, m](double x, double y) {
        const double g = l * u.partial(x, y, 1, 0) + m * u.partial(x, y, 0, 1);
        return g * g;
    };
    if (u.partial_fn && u.max_partial_order >= 3) {
        f.partial_fn = [u, l, m](double x, double y, int i, int j) -> double {
            auto g = [&](int a, int b) {
                return l * u.partial(x, y, a + 1, b) + m * u.partial(x, y, a, b + 1);
            };
            if (i + j == 0) return g(0, 0) * g(0, 0);
            if (i + j == 1) return 2.0 * g(0, 0) * g(i, j);
            if (i + j == 2) {
                if (i == 2) return 2.0 * (g(1, 0) * g(1, 0) + g(0, 0) * g(2, 0));
                if (j == 2) return 2.0 * (g(0, 1) * g(0, 1) + g(0, 0) * g(0, 2));
                return 2.0 * (g(1, 0) * g(0, 1) + g(0, 0) * g(1, 1));
            }
            throw std::invalid_argument("directional_square: partials available to order 2");
        };
        f.max_partial_order = 2;
    }
    return f;
}

// --------------------------------------------------------------------------
// Hessian determinant u_xx u_yy - u_xy^2, and the graph Gauss curvature
// det / (1 + |grad u|^2)^2.  These differ: the canonical cusp example quotes
// the determinant, so both are exposed under distinct names.

inline Field2D hessian_det(const Field2D& u) {
    Field2D f;
    f.xdom = u.xdom;
    f.ydom = u.ydom;
    f.eval_fn = [u](double x, double y) {
        const double uxx = u.partial(x, y, 2, 0);
        const double uyy = u.partial(x, y, 0, 2);
        const double uxy = u.partial(x, y, 1, 1);
        return uxx * uyy - uxy * uxy;
    };
    return f;
}

inline Field2D gauss_curvature(const Field2D& u) {
    Field2D f;
    f.xdom = u.xdom;
    f.ydom = u.ydom;
    f.eval_fn = [u](double x, double y) {
        const double uxx = u.partial(x, y, 2, 0);
        const double uyy = u.partial(x, y, 0, 2);
        const double uxy = u.partial(x, y, 1, 1);
        const double ux = u.partial(x, y, 1, 0);
        const double uy = u.partial(x, y, 0, 1);
        const double w = 1.0 + ux * ux + uy * uy;
        return (uxx * uyy - uxy * uxy) / (w * w);
    };
    return f;
}

// --------------------------------------------------------------------------
// Recover mixed thirds from directional thirds along dx+dy, dx-dy, dx, dy:
//   u_xxy = (u_zzz - u_www - 2 u_yyy) / 6
//   u_xyy = (u_zzz + u_www - 2 u_xxx) / 6

struct MixedThirds {
    double uxxy = 0.0;
    double uxyy = 0.0;
};

inline MixedThirds mixed_third_recovery(double u_zzz, double u_www, double u_xxx, double u_yyy) {
    return {(u_zzz - u_www - 2.0 * u_yyy) / 6.0, (u_zzz + u_www - 2.0 * u_xxx) / 6.0};
}

// --------------------------------------------------------------------------
// Touch curve: for each sampled y, the zero of x -> u_x(x, y) on xI, with the
// boundary conventions T = xI.lo when u_x >= 0 throughout and T = xI.hi when
// u_x < 0 throughout.

enum class TouchFlag { InteriorRoot, AllNonneg, AllNeg };

struct TouchCurve {
    Interval xI{-1.0, 1.0}, yI{-1.0, 1.0};
    std::vector<double> y;
    std::vector<double> a;
    std::vector<TouchFlag> flag;
};

inline TouchCurve touch_curve(const Field2D& u, Interval yI, Interval xI, int ny = 257,
                              int nx_check = 129) {
    TouchCurve t;
    t.xI = xI;
    t.yI = yI;
    auto ux = [&](double x, double y) { return u.partial(x, y, 1, 0); };
    double scale = 1e-30;
    for (int j = 0; j < ny; ++j) {
        const double y = yI.lo + yI.length() * j / (ny - 1);
        for (int i = 0; i < nx_check; ++i)
            scale = std::max(scale, std::abs(ux(xI.lo + xI.length() * i / (nx_check - 1), y)));
    }
    const double mono_tol = 1e-12 * (1.0 + scale);
    for (int j = 0; j < ny; ++j) {
        const double y = yI.lo + yI.length() * j / (ny - 1);
        // strict monotonicity of u_x in x, sampled
        double prev = ux(xI.lo, y);
        for (int i = 1; i < nx_check; ++i) {
            const double x = xI.lo + xI.length() * i / (nx_check - 1);
            const double v = ux(x, y);
            if (v < prev - mono_tol)
                throw std::domain_error("touch_curve: u_x is not increasing in x at (x=" +
                                        std::to_string(x) + ", y=" + std::to_string(y) + ")");
            prev = v;
        }
        const double lo_v = ux(xI.lo, y), hi_v = ux(xI.hi, y);
        t.y.push_back(y);
        if (lo_v >= 0.0) {
            t.a.push_back(xI.lo);
            t.flag.push_back(TouchFlag::AllNonneg);
        } else if (hi_v < 0.0) {
            t.a.push_back(xI.hi);
            t.flag.push_back(TouchFlag::AllNeg);
        } else {
            double a = xI.lo, b = xI.hi;
            for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
                const double m = 0.5 * (a + b);
                if (ux(m, y) < 0.0)
                    a = m;
                else
                    b = m;
            }
            t.a.push_back(0.5 * (a + b));
            t.flag.push_back(TouchFlag::InteriorRoot);
        }
    }
    return t;
}

// Discrete lower-semicontinuity check.  Sampling cannot distinguish a jump
// taking its lower value (allowed) from one taking its upper value unless the
// jump point is itself sampled, where it shows as an isolated spike above
// both neighbors.  Downward jumps and convention switches therefore pass; a
// sample strictly above both neighbors by more than the estimated modulus
// omega(h) fails.
inline CertReport check_lsc(const TouchCurve& t) {
    CertReport rep;
    rep.name = "touch-lsc";
    const int n = static_cast<int>(t.y.size());
    rep.grid_params.n = n;
    if (n < 3) {
        rep.note("fewer than three samples; nothing to check");
        return rep;
    }
    const double h = t.y[1] - t.y[0];
    // modulus estimate from same-flag adjacent slopes (robust percentile)
    std::vector<double> slopes;
    for (int i = 0; i + 1 < n; ++i)
        if (t.flag[i] == TouchFlag::InteriorRoot && t.flag[i + 1] == TouchFlag::InteriorRoot)
            slopes.push_back(std::abs(t.a[i + 1] - t.a[i]) / h);
    double lip = 0.0;
    if (!slopes.empty()) {
        std::sort(slopes.begin(), slopes.end());
        lip = slopes[static_cast<std::size_t>(0.9 * (slopes.size() - 1))];
    }
    const double omega = 3.0 * lip * h + 1e-9 * (1.0 + t.xI.length());
    rep.note("modulus omega(h) = " + fmt_g(omega) + " at h = " + fmt_g(h));

    double worst = 0.0;
    Witness worst_w{};
    double worst_min_based = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double spike = t.a[i] - std::max(t.a[i - 1], t.a[i + 1]);
        const double excess = t.a[i] - std::min(t.a[i - 1], t.a[i + 1]);
        worst_min_based = std::max(worst_min_based, excess);
        if (spike > worst) {
            worst = spike;
            worst_w = {t.y[i], 0.0, spike};
        }
        if (spike > omega) rep.fail({t.y[i], 0.0, spike}, "isolated spike above both neighbors");
    }
    rep.empirical_constant = worst;
    rep.note("worst one-sided excess (diagnostic, jumps allowed) = " + fmt_g(worst_min_based));
    if (rep.passed && worst_w.value > 0.0) rep.witnesses.push_back(worst_w);
    return rep;
}

// --------------------------------------------------------------------------
// Mollifier rho(x) = c exp(1/(|x|^2 - 1)) on the unit ball.

inline double mollifier_bump(double t2) {  // t2 = |x|^2, support t2 < 1
    return t2 < 1.0 ? std::exp(1.0 / (t2 - 1.0)) : 0.0;
}

// int_{-1}^{1} exp(1/(x^2-1)) dx: the reciprocal is the 1D normalization c.
inline double mollifier_mass_1d() {
    return integrate([](double x) { return mollifier_bump(x * x); }, -1.0, 1.0, 1e-13);
}

// 2D mass by the radial formula 2 pi int_0^1 rho r dr.
inline double mollifier_mass_2d() {
    return 2.0 * M_PI *
           integrate([](double r) { return mollifier_bump(r * r) * r; }, 0.0, 1.0, 1e-13);
}

// Discrete convolution with the sampled radial bump, kernel mass renormalized
// on the grid so that constants are preserved exactly.  Output only where the
// full stencil fits: the domain shrinks by tau per side.
inline Field2D mollify(const Field2D& w, double tau) {
    if (!w.grid) throw std::invalid_argument("mollify: field must carry a grid");
    if (!(tau > 0.0)) throw std::invalid_argument("mollify: tau must be > 0");
    const auto& g = *w.grid;
    const int kx = static_cast<int>(std::ceil(tau / g.hx)) ;
    const int ky = static_cast<int>(std::ceil(tau / g.hy));
    if (2 * kx + 2 > g.nx || 2 * ky + 2 > g.ny)
        throw std::invalid_argument("mollify: tau too large for the grid domain");

    // kernel samples on node offsets within the support
    std::vector<double> ker(static_cast<std::size_t>(2 * kx + 1) * (2 * ky + 1), 0.0);
    double mass = 0.0;
    for (int dj = -ky; dj <= ky; ++dj)
        for (int di = -kx; di <= kx; ++di) {
            const double zx = di * g.hx / tau, zy = dj * g.hy / tau;
            const double v = mollifier_bump(zx * zx + zy * zy);
            ker[static_cast<std::size_t>(dj + ky) * (2 * kx + 1) + (di + kx)] = v;
            mass += v;
        }
    if (mass <= 0.0) throw std::invalid_argument("mollify: kernel has no support on the grid");
    for (auto& v : ker) v /= mass;

    auto out = std::make_shared<GridData2D>();
    out->nx = g.nx - 2 * kx;
    out->ny = g.ny - 2 * ky;
    out->hx = g.hx;
    out->hy = g.hy;
    out->x0 = g.x0 + kx * g.hx;
    out->y0 = g.y0 + ky * g.hy;
    out->v.assign(static_cast<std::size_t>(out->nx) * out->ny, 0.0);
    for (int j = 0; j < out->ny; ++j)
        for (int i = 0; i < out->nx; ++i) {
            double s = 0.0;
            for (int dj = -ky; dj <= ky; ++dj) {
                const double* krow = &ker[static_cast<std::size_t>(dj + ky) * (2 * kx + 1)];
                const double* wrow = &g.v[static_cast<std::size_t>(j + ky + dj) * g.nx + i];
                for (int di = 0; di <= 2 * kx; ++di) s += krow[di] * wrow[di];
            }
            out->at(i, j) = s;
        }
    return make_grid_field(out);
}

// Directional difference-quotient bound preservation: sup |D w_tau| against
// the input-grid quotient bound.  The discrete convolution preserves the
// bound exactly (nonnegative kernel of unit mass), so failures indicate a
// grid/kernel defect; for Cantor-type inputs both suprema grow with depth.
inline CertReport check_mollified_bound(const Field2D& w, double tau, char direction) {
    if (!w.grid) throw std::invalid_argument("check_mollified_bound: field must carry a grid");
    if (direction != 'x' && direction != 'y')
        throw std::invalid_argument("check_mollified_bound: direction must be 'x' or 'y'");
    CertReport rep;
    rep.name = std::string("mollified-derivative-bound-") + direction;
    const auto& g = *w.grid;
    rep.grid_params.nx = g.nx;
    rep.grid_params.ny = g.ny;

    auto quotient_sup = [direction](const GridData2D& d) {
        double m = 0.0;
        if (direction == 'x') {
            for (int j = 0; j < d.ny; ++j)
                for (int i = 0; i + 1 < d.nx; ++i)
                    m = std::max(m, std::abs(d.at(i + 1, j) - d.at(i, j)) / d.hx);
        } else {
            for (int j = 0; j + 1 < d.ny; ++j)
                for (int i = 0; i < d.nx; ++i)
                    m = std::max(m, std::abs(d.at(i, j + 1) - d.at(i, j)) / d.hy);
        }
        return m;
    };
    const double c_in = quotient_sup(g);
    Field2D wt = mollify(w, tau);
    const double c_out = quotient_sup(*wt.grid);
    rep.empirical_constant = c_out;
    rep.note("input quotient bound C = " + fmt_g(c_in));
    rep.note("mollified quotient sup = " + fmt_g(c_out));
    if (c_out > c_in * (1.0 + 1e-6) + 1e-12)
        rep.fail({0, 0, c_out - c_in}, "mollified directional derivative exceeds the input bound");
    return rep;
}

}  // namespace macert::surface
