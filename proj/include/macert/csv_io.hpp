#pragma once

// CSV formats and profile ingestion.  1D profiles are two columns (r, value);
// 2D grid fields are (x, y, value) row-major with a header line, plus a small
// JSON sidecar carrying domain and spacing.  Ingested profiles are
// interpolated with a monotone cubic (Fritsch-Carlson) whose derivatives are
// finite-difference backed, and every report derived from them carries an
// interpolation-order note.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "macert/field2d.hpp"
#include "macert/func_core.hpp"
#include "macert/radial_ma.hpp"

namespace macert::io {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// --------------------------------------------------------------------------
// Monotone cubic (PCHIP) interpolation on strictly increasing nodes.

class Pchip {
  public:
    Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3) throw std::invalid_argument("pchip: need at least 3 rows");
        d_.resize(n);
        std::vector<double> h(n - 1), slope(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            if (!(h[i] > 0.0)) throw std::invalid_argument("pchip: x must be strictly increasing");
            slope[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slope[i - 1] * slope[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
            }
        }
        d_[0] = edge_slope(h[0], h[1], slope[0], slope[1]);
        d_[n - 1] = edge_slope(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    }

    double eval(double x) const {
        const std::size_t i = locate(x);
        const double h = x_[i + 1] - x_[i], t = (x - x_[i]) / h;
        const double y0 = y_[i], y1 = y_[i + 1], m0 = d_[i] * h, m1 = d_[i + 1] * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * m1;
    }

    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }
    double min_spacing() const {
        double m = 1e300;
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) m = std::min(m, x_[i + 1] - x_[i]);
        return m;
    }

  private:
    static double edge_slope(double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    }
    std::size_t locate(double x) const {
        std::size_t lo = 0, hi = x_.size() - 2;
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return hi;
        while (lo < hi) {
            const std::size_t m = (lo + hi + 1) / 2;
            if (x_[m] <= x)
                lo = m;
            else
                hi = m - 1;
        }
        return lo;
    }
    std::vector<double> x_, y_, d_;
};

// SmoothFn1D backed by the interpolant; derivatives 1..2 by central
// differences of the interpolant (the cubic is C^1, so order 2 is the honest
// ceiling and the jets carry max_order = 2).
inline SmoothFn1D pchip_fn(std::vector<double> x, std::vector<double> y) {
    auto p = std::make_shared<Pchip>(std::move(x), std::move(y));
    const double h = std::max(p->min_spacing() * 0.25, 1e-7);
    return SmoothFn1D(
        Interval(p->lo() - 1e-12, p->hi() + 1e-12),
        [p, h](double t) {
            Jet4 j;
            j.a[0] = p->eval(t);
            j.a[1] = (p->eval(t + h) - p->eval(t - h)) / (2.0 * h);
            j.a[2] = 0.5 * (p->eval(t + h) - 2.0 * p->eval(t) + p->eval(t - h)) / (h * h);
            return j;
        },
        2);
}

// --------------------------------------------------------------------------
// CSV parsing

struct ProfileRows {
    std::vector<double> r, v;
};

inline ProfileRows read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ProfileRows rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        for (auto& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        double r, v;
        if (!(ss >> r >> v)) {
            if (lineno == 1) continue;  // header line
            throw std::runtime_error(path + ": malformed row " + std::to_string(lineno));
        }
        if (std::isnan(r) || std::isnan(v))
            throw std::runtime_error(path + ": NaN in row " + std::to_string(lineno));
        if (v < 0.0)
            throw std::runtime_error(path + ": negative profile value in row " +
                                     std::to_string(lineno));
        if (!rows.r.empty() && r <= rows.r.back())
            throw std::runtime_error(path + ": non-monotone r column at row " +
                                     std::to_string(lineno));
        rows.r.push_back(r);
        rows.v.push_back(v);
    }
    if (rows.r.size() < 3) throw std::runtime_error(path + ": need at least 3 data rows");
    return rows;
}

inline radial::RadialProfile ingest_profile(const std::string& path) {
    ProfileRows rows = read_profile_csv(path);
    const double rho = rows.r.back();
    if (rows.r.front() > 1e-9)
        throw std::runtime_error(path + ": profile must start at r = 0");
    return radial::profile_from_fn(pchip_fn(std::move(rows.r), std::move(rows.v)), rho);
}

inline void write_profile_csv(const std::string& path, const SmoothFn1D& psi, double rho,
                              int n = 1001) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "r,psi\n";
    for (int i = 0; i < n; ++i) {
        const double r = rho * i / (n - 1);
        out << csv_num(r) << "," << csv_num(psi.eval(r)) << "\n";
    }
}

inline void write_solution_csv(const std::string& path,
                               const std::vector<radial::SolutionRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "r,F,phi_r,phi,residual\n";
    for (const auto& row : rows)
        out << csv_num(row.r) << "," << csv_num(row.F) << "," << csv_num(row.phi_r) << ","
            << csv_num(row.phi) << "," << csv_num(row.residual) << "\n";
}

inline void write_xy_csv(const std::string& path, const std::string& xname,
                         const std::string& yname,
                         const std::vector<std::pair<double, double>>& pts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << xname << "," << yname << "\n";
    for (const auto& [x, y] : pts) out << csv_num(x) << "," << csv_num(y) << "\n";
}

// 2D grid field: data CSV plus JSON header sidecar.
inline void write_grid_csv(const std::string& path, const GridData2D& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,y,value\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out << csv_num(g.x(i)) << "," << csv_num(g.y(j)) << "," << csv_num(g.at(i, j)) << "\n";
    nlohmann::ordered_json hdr;
    hdr["domain"] = {{"x", {g.x0, g.x(g.nx - 1)}}, {"y", {g.y0, g.y(g.ny - 1)}}};
    hdr["spacing"] = {{"hx", g.hx}, {"hy", g.hy}};
    hdr["shape"] = {{"nx", g.nx}, {"ny", g.ny}};
    hdr["order"] = "row-major";
    std::ofstream hout(path + ".header.json");
    hout << hdr.dump(2) << "\n";
}

inline std::shared_ptr<GridData2D> read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<double> xs, ys, vs;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        for (auto& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        double x, y, v;
        if (!(ss >> x >> y >> v)) {
            if (lineno == 1) continue;
            throw std::runtime_error(path + ": malformed row " + std::to_string(lineno));
        }
        if (std::isnan(x) || std::isnan(y) || std::isnan(v))
            throw std::runtime_error(path + ": NaN in row " + std::to_string(lineno));
        xs.push_back(x);
        ys.push_back(y);
        vs.push_back(v);
    }
    if (vs.size() < 9) throw std::runtime_error(path + ": need at least a 3x3 grid");
    // infer the row-major structure: nx = number of leading entries sharing y
    int nx = 1;
    while (nx < static_cast<int>(vs.size()) && ys[nx] == ys[0]) ++nx;
    const int ny = static_cast<int>(vs.size()) / nx;
    if (nx < 3 || ny < 3 || nx * ny != static_cast<int>(vs.size()))
        throw std::runtime_error(path + ": rows do not form a row-major rectangular grid");
    auto g = std::make_shared<GridData2D>();
    g->nx = nx;
    g->ny = ny;
    g->x0 = xs[0];
    g->y0 = ys[0];
    g->hx = (xs[nx - 1] - xs[0]) / (nx - 1);
    g->hy = (ys[static_cast<std::size_t>(nx) * (ny - 1)] - ys[0]) / (ny - 1);
    if (!(g->hx > 0.0) || !(g->hy > 0.0))
        throw std::runtime_error(path + ": grid spacings must be positive");
    g->v = std::move(vs);
    return g;
}

}  // namespace macert::io
