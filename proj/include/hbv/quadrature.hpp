#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace hbv {

/// Documented accuracy of the default composite-Simpson quadrature on the
/// default 256-interval grid for the built-in kernels and nonlinearities.
inline constexpr double kQuadratureTolerance = 1e-8;
inline constexpr int kDefaultQuadratureIntervals = 256;

/// Composite Simpson rule with m subintervals (each evaluated at its
/// endpoints and midpoint).
template <class F>
double simpson(F&& f, double lo, double hi, int m) {
    if (hi <= lo) return 0.0;
    if (m < 1) m = 1;
    const double h = (hi - lo) / m;
    double acc = 0.0;
    double left = f(lo);
    for (int i = 0; i < m; ++i) {
        const double a = lo + i * h;
        const double b = (i + 1 == m) ? hi : lo + (i + 1) * h;
        const double right = f(b);
        acc += (b - a) / 6.0 * (left + 4.0 * f(0.5 * (a + b)) + right);
        left = right;
    }
    return acc;
}

/// Composite Simpson over [lo, hi] with mandatory splits at the given kink
/// abscissae (clamped to the interval).  `n_per_unit` subintervals are used
/// per unit length on each smooth segment.
template <class F>
double simpson_split(F&& f, double lo, double hi, std::span<const double> kinks,
                     int n_per_unit = kDefaultQuadratureIntervals) {
    if (hi <= lo) return 0.0;
    std::vector<double> pts{lo, hi};
    for (double k : kinks)
        if (k > lo && k < hi) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double a = pts[i - 1], b = pts[i];
        const int m = std::max(1, static_cast<int>(std::ceil((b - a) * n_per_unit)));
        acc += simpson(f, a, b, m);
    }
    return acc;
}

}  // namespace hbv
