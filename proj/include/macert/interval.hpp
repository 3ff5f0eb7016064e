#pragma once

#include <stdexcept>
#include <string>

namespace macert {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(lo < hi)) throw std::invalid_argument("Interval: lo must be < hi");
    }

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }

    // The interval scaled by c about its midpoint (c=2 gives "2I").
    Interval scaled(double c) const {
        const double m = midpoint(), h = 0.5 * length() * c;
        return Interval(m - h, m + h);
    }
    Interval translated(double t) const { return Interval(lo + t, hi + t); }
};

inline std::string to_string(const Interval& I) {
    return "[" + std::to_string(I.lo) + ", " + std::to_string(I.hi) + "]";
}

}  // namespace macert
