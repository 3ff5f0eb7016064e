#pragma once

// Truncated Taylor arithmetic ("jets"): a Jet<N> carries the value and the
// first N derivatives of a function at a point, stored as Taylor coefficients
// a[k] = f^(k)/k!.  Propagating jets through closed-form expressions yields
// exact derivatives up to order N (up to roundoff), which is how every
// derivative oracle in this library is built.

#include <array>
#include <cmath>
#include <stdexcept>

namespace macert {

template <int N>
struct Jet {
    static_assert(N >= 1);
    std::array<double, N + 1> a{};

    constexpr Jet() = default;

    static Jet variable(double x) {
        Jet j;
        j.a[0] = x;
        j.a[1] = 1.0;
        return j;
    }
    static Jet constant(double c) {
        Jet j;
        j.a[0] = c;
        return j;
    }

    double value() const { return a[0]; }

    // f^(k), k <= N
    double deriv(int k) const {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return a[static_cast<std::size_t>(k)] * fact;
    }

    Jet operator-() const {
        Jet r;
        for (int k = 0; k <= N; ++k) r.a[k] = -a[k];
        return r;
    }
    Jet& operator+=(const Jet& o) {
        for (int k = 0; k <= N; ++k) a[k] += o.a[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k <= N; ++k) a[k] -= o.a[k];
        return *this;
    }
    Jet& operator*=(double c) {
        for (int k = 0; k <= N; ++k) a[k] *= c;
        return *this;
    }

    // Taylor coefficients of t -> f(x + t) differentiated once: the jet of f'
    // truncated to order N-1 (the top slot is zero-filled).
    Jet derivative_jet() const {
        Jet r;
        for (int k = 0; k < N; ++k) r.a[k] = a[k + 1] * (k + 1);
        return r;
    }
};

template <int N>
Jet<N> operator+(Jet<N> x, const Jet<N>& y) { return x += y; }
template <int N>
Jet<N> operator-(Jet<N> x, const Jet<N>& y) { return x -= y; }
template <int N>
Jet<N> operator+(Jet<N> x, double c) { x.a[0] += c; return x; }
template <int N>
Jet<N> operator+(double c, Jet<N> x) { x.a[0] += c; return x; }
template <int N>
Jet<N> operator-(Jet<N> x, double c) { x.a[0] -= c; return x; }
template <int N>
Jet<N> operator-(double c, const Jet<N>& x) { return (-x) + c; }
template <int N>
Jet<N> operator*(Jet<N> x, double c) { return x *= c; }
template <int N>
Jet<N> operator*(double c, Jet<N> x) { return x *= c; }
template <int N>
Jet<N> operator/(Jet<N> x, double c) { return x *= (1.0 / c); }

template <int N>
Jet<N> operator*(const Jet<N>& x, const Jet<N>& y) {
    Jet<N> r;
    for (int k = 0; k <= N; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += x.a[i] * y.a[k - i];
        r.a[k] = s;
    }
    return r;
}

// Compose an analytic g with jet x, given the Taylor coefficients of g at
// x.value(): result = sum_k g_k * (x - x0)^k, truncated.
template <int N>
Jet<N> compose(const std::array<double, N + 1>& g, const Jet<N>& x) {
    Jet<N> dx = x;
    dx.a[0] = 0.0;
    // Horner in the nilpotent part
    Jet<N> r = Jet<N>::constant(g[N]);
    for (int k = N - 1; k >= 0; --k) {
        r = r * dx;
        r.a[0] += g[k];
    }
    return r;
}

template <int N>
Jet<N> exp(const Jet<N>& x) {
    std::array<double, N + 1> g;
    const double e0 = std::exp(x.value());
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
        if (k > 1) fact *= k;
        g[k] = e0 / fact;
    }
    return compose<N>(g, x);
}

template <int N>
Jet<N> sin(const Jet<N>& x) {
    std::array<double, N + 1> g;
    const double s0 = std::sin(x.value()), c0 = std::cos(x.value());
    const double cyc[4] = {s0, c0, -s0, -c0};
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
        if (k > 1) fact *= k;
        g[k] = cyc[k % 4] / fact;
    }
    return compose<N>(g, x);
}

template <int N>
Jet<N> cos(const Jet<N>& x) {
    std::array<double, N + 1> g;
    const double s0 = std::sin(x.value()), c0 = std::cos(x.value());
    const double cyc[4] = {c0, -s0, -c0, s0};
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
        if (k > 1) fact *= k;
        g[k] = cyc[k % 4] / fact;
    }
    return compose<N>(g, x);
}

// 1/x; requires x.value() != 0
template <int N>
Jet<N> recip(const Jet<N>& x) {
    const double v = x.value();
    if (v == 0.0) throw std::domain_error("jet recip at zero");
    std::array<double, N + 1> g;
    double p = 1.0 / v;
    for (int k = 0; k <= N; ++k) {
        g[k] = (k % 2 == 0 ? p : -p);
        p /= v;
    }
    return compose<N>(g, x);
}

template <int N>
Jet<N> operator/(const Jet<N>& x, const Jet<N>& y) { return x * recip(y); }
template <int N>
Jet<N> operator/(double c, const Jet<N>& y) { return recip(y) * c; }

// sqrt; requires x.value() > 0
template <int N>
Jet<N> sqrt(const Jet<N>& x) {
    const double v = x.value();
    if (v <= 0.0) throw std::domain_error("jet sqrt at nonpositive value");
    std::array<double, N + 1> g;
    const double r0 = std::sqrt(v);
    // d^k/dv^k v^{1/2} / k! = r0 * prod_{i<k}(1/2 - i) / (k! v^k)
    double coef = r0;
    g[0] = coef;
    double pow_v = 1.0, fact = 1.0, falling = 1.0;
    for (int k = 1; k <= N; ++k) {
        falling *= (0.5 - (k - 1));
        fact *= k;
        pow_v *= v;
        g[k] = r0 * falling / (fact * pow_v);
    }
    return compose<N>(g, x);
}

// x^p for real p; requires x.value() > 0
template <int N>
Jet<N> pow(const Jet<N>& x, double p) {
    const double v = x.value();
    if (v <= 0.0) throw std::domain_error("jet pow at nonpositive value");
    std::array<double, N + 1> g;
    const double v_p = std::pow(v, p);
    g[0] = v_p;
    double pow_v = 1.0, fact = 1.0, falling = 1.0;
    for (int k = 1; k <= N; ++k) {
        falling *= (p - (k - 1));
        fact *= k;
        pow_v *= v;
        g[k] = v_p * falling / (fact * pow_v);
    }
    return compose<N>(g, x);
}

template <int N>
Jet<N> log(const Jet<N>& x) {
    const double v = x.value();
    if (v <= 0.0) throw std::domain_error("jet log at nonpositive value");
    std::array<double, N + 1> g;
    g[0] = std::log(v);
    double p = 1.0 / v;
    for (int k = 1; k <= N; ++k) {
        g[k] = (k % 2 == 1 ? p : -p) / k;
        p /= v;
    }
    return compose<N>(g, x);
}

using Jet4 = Jet<4>;
using Jet5 = Jet<5>;

}  // namespace macert
