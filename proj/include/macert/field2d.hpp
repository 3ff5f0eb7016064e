#pragma once

// Scalar fields on a 2D rectangle.  A Field2D always evaluates pointwise; it
// may additionally carry (a) a jet backend, which makes every line restriction
// a SmoothFn1D with exact derivatives, (b) an exact partial-derivative
// backend (polynomials, radial profiles), and (c) a uniform grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "macert/func_core.hpp"
#include "macert/interval.hpp"
#include "macert/jet.hpp"

namespace macert {

struct GridData2D {
    double x0 = 0.0, y0 = 0.0, hx = 1.0, hy = 1.0;
    int nx = 0, ny = 0;
    std::vector<double> v;  // row-major, v[j*nx + i]

    double at(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }
    double& at(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
};

class Field2D {
  public:
    Interval xdom{-1.0, 1.0}, ydom{-1.0, 1.0};
    std::function<double(double, double)> eval_fn;
    std::function<Jet5(const Jet5&, const Jet5&)> jet_fn;            // optional
    std::function<double(double, double, int, int)> partial_fn;      // optional, dx^i dy^j
    int max_partial_order = 0;
    std::shared_ptr<const GridData2D> grid;

    double eval(double x, double y) const { return eval_fn(x, y); }
    bool has_jets() const { return static_cast<bool>(jet_fn); }
    bool in_domain(double x, double y) const { return xdom.contains(x) && ydom.contains(y); }

    // Mixed/pure partial d^{i+j} u / dx^i dy^j.  Exact backend if present,
    // else derived from the jet backend (pure orders and u_xy), else
    // second-order finite differences on the grid.
    double partial(double x, double y, int i, int j) const {
        if (partial_fn && i + j <= max_partial_order) return partial_fn(x, y, i, j);
        if (jet_fn) {
            if (j == 0) return line_jet(x, y, 1.0, 0.0).deriv(i);
            if (i == 0) return line_jet(x, y, 0.0, 1.0).deriv(j);
            if (i == 1 && j == 1) {
                const double inv = 1.0 / std::sqrt(2.0);
                const double dd = line_jet(x, y, inv, inv).deriv(2);
                const double xx = line_jet(x, y, 1.0, 0.0).deriv(2);
                const double yy = line_jet(x, y, 0.0, 1.0).deriv(2);
                return dd - 0.5 * (xx + yy);
            }
            throw std::invalid_argument("Field2D::partial: mixed order beyond u_xy needs an "
                                        "exact partial backend");
        }
        if (grid) return grid_partial(x, y, i, j);
        throw std::invalid_argument("Field2D::partial: no derivative backend");
    }

    // Jet of t -> u((x,y) + t (dx,dy)) at t = 0.
    Jet5 line_jet(double x, double y, double dx, double dy) const {
        if (!jet_fn) throw std::invalid_argument("Field2D::line_jet: no jet backend");
        Jet5 xt = Jet5::constant(x);
        xt.a[1] = dx;
        Jet5 yt = Jet5::constant(y);
        yt.a[1] = dy;
        return jet_fn(xt, yt);
    }

  private:
    double grid_partial(double x, double y, int i, int j) const {
        const auto& g = *grid;
        int ci = static_cast<int>(std::lround((x - g.x0) / g.hx));
        int cj = static_cast<int>(std::lround((y - g.y0) / g.hy));
        const int r = std::max(i, j) >= 3 ? 2 : 1;
        ci = std::clamp(ci, r, g.nx - 1 - r);
        cj = std::clamp(cj, r, g.ny - 1 - r);
        auto vx = [&](int di, int dj) { return g.at(ci + di, cj + dj); };
        if (i == 0 && j == 0) return vx(0, 0);
        if (i == 1 && j == 0) return (vx(1, 0) - vx(-1, 0)) / (2 * g.hx);
        if (i == 0 && j == 1) return (vx(0, 1) - vx(0, -1)) / (2 * g.hy);
        if (i == 2 && j == 0) return (vx(1, 0) - 2 * vx(0, 0) + vx(-1, 0)) / (g.hx * g.hx);
        if (i == 0 && j == 2) return (vx(0, 1) - 2 * vx(0, 0) + vx(0, -1)) / (g.hy * g.hy);
        if (i == 1 && j == 1)
            return (vx(1, 1) - vx(1, -1) - vx(-1, 1) + vx(-1, -1)) / (4 * g.hx * g.hy);
        throw std::invalid_argument("Field2D::partial: grid backend supports total order <= 2");
    }
};

// --------------------------------------------------------------------------
// Constructors

// Closed-form field from a jet expression (templated on a callable taking two
// Jet5 and returning Jet5).
template <typename F>
Field2D make_field(Interval xdom, Interval ydom, F&& expr) {
    Field2D f;
    f.xdom = xdom;
    f.ydom = ydom;
    auto e = std::forward<F>(expr);
    f.jet_fn = [e](const Jet5& x, const Jet5& y) { return e(x, y); };
    f.eval_fn = [e](double x, double y) {
        return e(Jet5::constant(x), Jet5::constant(y)).value();
    };
    return f;
}

// Bivariate polynomial with exact partials of every order.
struct Poly2 {
    // coeff[i][j] multiplies x^i y^j
    std::vector<std::vector<double>> coeff;

    static Poly2 zero(int deg_x, int deg_y) {
        Poly2 p;
        p.coeff.assign(deg_x + 1, std::vector<double>(deg_y + 1, 0.0));
        return p;
    }
    static Poly2 monomial(int i, int j, double c = 1.0) {
        Poly2 p = zero(i, j);
        p.coeff[i][j] = c;
        return p;
    }

    double eval(double x, double y) const {
        double s = 0.0;
        for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i) {
            double row = 0.0;
            for (int j = static_cast<int>(coeff[i].size()) - 1; j >= 0; --j)
                row = row * y + coeff[i][j];
            s = s * x + row;
        }
        return s;
    }

    double partial(double x, double y, int px, int py) const {
        double s = 0.0;
        for (std::size_t i = px; i < coeff.size(); ++i)
            for (std::size_t j = py; j < coeff[i].size(); ++j) {
                if (coeff[i][j] == 0.0) continue;
                double c = coeff[i][j];
                for (int k = 0; k < px; ++k) c *= static_cast<double>(i - k);
                for (int k = 0; k < py; ++k) c *= static_cast<double>(j - k);
                s += c * std::pow(x, static_cast<double>(i - px)) *
                     std::pow(y, static_cast<double>(j - py));
            }
        return s;
    }

    template <int N>
    Jet<N> eval_jet(const Jet<N>& x, const Jet<N>& y) const {
        Jet<N> s = Jet<N>::constant(0.0);
        for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i) {
            Jet<N> row = Jet<N>::constant(0.0);
            for (int j = static_cast<int>(coeff[i].size()) - 1; j >= 0; --j)
                row = row * y + coeff[i][j];
            s = s * x + row;
        }
        return s;
    }
};

inline Field2D make_poly_field(Interval xdom, Interval ydom, Poly2 p) {
    auto sp = std::make_shared<Poly2>(std::move(p));
    Field2D f;
    f.xdom = xdom;
    f.ydom = ydom;
    f.eval_fn = [sp](double x, double y) { return sp->eval(x, y); };
    f.jet_fn = [sp](const Jet5& x, const Jet5& y) { return sp->eval_jet(x, y); };
    f.partial_fn = [sp](double x, double y, int i, int j) { return sp->partial(x, y, i, j); };
    f.max_partial_order = 32;
    return f;
}

// Radial field u(x, y) = phi(r), r = sqrt(x^2 + y^2); profile_jet(r) returns
// the jet of phi at r > 0.  Exact partials up to total order 3 from the chain
// rule; jets by composition (valid away from the origin).
inline Field2D make_radial_field(Interval xdom, Interval ydom,
                                 std::function<Jet5(double)> profile_jet) {
    Field2D f;
    f.xdom = xdom;
    f.ydom = ydom;
    f.eval_fn = [profile_jet](double x, double y) {
        return profile_jet(std::hypot(x, y)).value();
    };
    f.jet_fn = [profile_jet](const Jet5& x, const Jet5& y) {
        const Jet5 r2 = x * x + y * y;
        if (r2.value() < 1e-240) {
            // a line through the origin: r has a kink there; the profile's
            // value and the graph normalization phi(0) = phi'(0) = 0 make the
            // constant jet the two-sided limit
            return Jet5::constant(profile_jet(0.0).value());
        }
        const Jet5 r = sqrt(r2);
        return compose<5>(profile_jet(r.value()).a, r);
    };
    f.partial_fn = [profile_jet](double x, double y, int i, int j) -> double {
        const double r = std::hypot(x, y);
        if (r == 0.0) throw std::domain_error("radial field partials undefined at the origin");
        const Jet5 ph = profile_jet(r);
        const double p1 = ph.deriv(1), p2 = ph.deriv(2), p3 = ph.deriv(3);
        const double c = x / r, s = y / r;
        auto val = [&](int ii, int jj, double cc, double ss) -> double {
            // formulas in terms of (cos, sin); swapping x<->y swaps (c, s)
            if (ii == 0 && jj == 0) return ph.value();
            if (ii == 1 && jj == 0) return p1 * cc;
            if (ii == 2 && jj == 0) return p2 * cc * cc + p1 * ss * ss / r;
            if (ii == 1 && jj == 1) return cc * ss * (p2 - p1 / r);
            if (ii == 3 && jj == 0)
                return p3 * cc * cc * cc + 3.0 * p2 * cc * ss * ss / r -
                       3.0 * p1 * cc * ss * ss / (r * r);
            if (ii == 2 && jj == 1)
                return p3 * ss * cc * cc + p2 * ss * (ss * ss - 2.0 * cc * cc) / r +
                       p1 * ss * (2.0 * cc * cc - ss * ss) / (r * r);
            return std::numeric_limits<double>::quiet_NaN();
        };
        double v = val(i, j, c, s);
        if (!std::isnan(v)) return v;
        v = val(j, i, s, c);  // mirror formulas
        if (!std::isnan(v)) return v;
        throw std::invalid_argument("radial field partials available up to total order 3");
    };
    f.max_partial_order = 3;
    return f;
}

inline Field2D make_grid_field(std::shared_ptr<const GridData2D> g) {
    Field2D f;
    f.grid = std::move(g);
    const auto& d = *f.grid;
    f.xdom = Interval(d.x0, d.x(d.nx - 1));
    f.ydom = Interval(d.y0, d.y(d.ny - 1));
    auto gp = f.grid;
    f.eval_fn = [gp](double x, double y) {
        const auto& g2 = *gp;
        // bilinear interpolation
        double fx = (x - g2.x0) / g2.hx, fy = (y - g2.y0) / g2.hy;
        int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g2.nx - 2);
        int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g2.ny - 2);
        const double tx = fx - i, ty = fy - j;
        return (1 - tx) * (1 - ty) * g2.at(i, j) + tx * (1 - ty) * g2.at(i + 1, j) +
               (1 - tx) * ty * g2.at(i, j + 1) + tx * ty * g2.at(i + 1, j + 1);
    };
    return f;
}

template <typename F>
std::shared_ptr<GridData2D> sample_grid_2d(const F& fn, Interval xdom, Interval ydom, int nx,
                                           int ny) {
    auto g = std::make_shared<GridData2D>();
    g->x0 = xdom.lo;
    g->y0 = ydom.lo;
    g->nx = nx;
    g->ny = ny;
    g->hx = xdom.length() / (nx - 1);
    g->hy = ydom.length() / (ny - 1);
    g->v.resize(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) g->at(i, j) = fn(g->x(i), g->y(j));
    return g;
}

inline std::shared_ptr<GridData2D> sample_grid_2d(const Field2D& u, Interval xdom, Interval ydom,
                                                  int nx, int ny) {
    return sample_grid_2d([&](double x, double y) { return u.eval(x, y); }, xdom, ydom, nx, ny);
}

// --------------------------------------------------------------------------
// Line restrictions

// t -> u(p + t d) as a SmoothFn1D (derivatives in t up to order 4).
inline SmoothFn1D restrict_line(const Field2D& u, double px, double py, double dx, double dy,
                                Interval tdom) {
    if (!u.has_jets()) throw std::invalid_argument("restrict_line: field has no jet backend");
    return SmoothFn1D(
        tdom,
        [u, px, py, dx, dy](double t) {
            const Jet5 w = u.line_jet(px + t * dx, py + t * dy, dx, dy);
            Jet4 r;
            for (int k = 0; k <= 4; ++k) r.a[k] = w.a[k];
            return r;
        },
        4);
}

// t -> (d/dt u(p + t d))^2: the directional derivative square along its own
// direction, with exact order-4 jets (u contributes order 5).
inline SmoothFn1D directional_square_on_line(const Field2D& u, double px, double py, double dx,
                                             double dy, Interval tdom) {
    if (!u.has_jets())
        throw std::invalid_argument("directional_square_on_line: field has no jet backend");
    return SmoothFn1D(
        tdom,
        [u, px, py, dx, dy](double t) {
            const Jet5 w = u.line_jet(px + t * dx, py + t * dy, dx, dy);
            Jet4 d;
            for (int k = 0; k < 5; ++k) d.a[k] = w.a[k + 1] * (k + 1);
            return d * d;
        },
        4);
}

}  // namespace macert
