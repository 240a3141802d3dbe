#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hbv {

/// Dense univariate polynomial, coefficients in the global monomial basis,
/// constant term first.  Used for the polynomial pieces of BV functions and
/// for exact product integration; most helpers accept arbitrary degree even
/// though BVFunction pieces are capped at degree 3.
using Poly = std::vector<double>;

inline double poly_eval(std::span<const double> c, double t) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

inline Poly poly_derivative(std::span<const double> c) {
    if (c.size() <= 1) return {};
    Poly d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

inline Poly poly_antiderivative(std::span<const double> c) {
    Poly a(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
    return a;
}

/// a*sa + b*sb, trimming trailing exact zeros.
inline Poly poly_axpby(std::span<const double> a, std::span<const double> b,
                       double sa = 1.0, double sb = 1.0) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += sa * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sb * b[i];
    while (r.size() > 1 && r.back() == 0.0) r.pop_back();
    return r;
}

inline Poly poly_mul(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {0.0};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

/// Exact definite integral of the polynomial over [lo, hi].
inline double poly_integral(std::span<const double> c, double lo, double hi) {
    Poly a = poly_antiderivative(c);
    return poly_eval(a, hi) - poly_eval(a, lo);
}

/// Real roots of a polynomial of degree <= 2 strictly inside (lo, hi),
/// appended to `out` (unsorted).  Degenerate (constant) derivatives yield
/// no roots; higher degrees are a caller error.
inline void poly_roots_in(std::span<const double> c, double lo, double hi,
                          std::vector<double>& out) {
    Poly p(c.begin(), c.end());
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    auto push = [&](double r) {
        if (r > lo && r < hi) out.push_back(r);
    };
    if (p.size() <= 1) return;
    if (p.size() == 2) {
        push(-p[0] / p[1]);
        return;
    }
    if (p.size() == 3) {
        const double a = p[2], b = p[1], c0 = p[0];
        const double disc = b * b - 4.0 * a * c0;
        if (disc <= 0.0) return;  // double root => no sign change, no extremum
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + std::copysign(sq, b));
        push(q / a);
        if (q != 0.0) push(c0 / q);
        return;
    }
    throw std::logic_error("poly_roots_in: degree > 2 unsupported");
}

/// Jordan variation of the polynomial over [lo, hi]: the arc is split at the
/// derivative's real roots and the monotone increments are summed.
inline double poly_variation(std::span<const double> c, double lo, double hi) {
    if (hi <= lo) return 0.0;
    Poly d = poly_derivative(c);
    std::vector<double> pts{lo};
    poly_roots_in(d, lo, hi, pts);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    double var = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        var += std::abs(poly_eval(c, pts[i]) - poly_eval(c, pts[i - 1]));
    return var;
}

/// Min and max of the polynomial over the closed interval [lo, hi].
inline void poly_range(std::span<const double> c, double lo, double hi,
                       double& mn, double& mx) {
    std::vector<double> pts{lo, hi};
    Poly d = poly_derivative(c);
    poly_roots_in(d, lo, hi, pts);
    mn = std::numeric_limits<double>::infinity();
    mx = -mn;
    for (double t : pts) {
        const double v = poly_eval(c, t);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
}

}  // namespace hbv
