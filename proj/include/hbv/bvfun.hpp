#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hbv/poly.hpp"
#include "hbv/quadrature.hpp"

namespace hbv {

/// Subset of [0,1] on which the cone's averaging functional acts: a finite
/// union of disjoint closed intervals of positive length.
class Domain {
public:
    using Segment = std::pair<double, double>;

    explicit Domain(std::vector<Segment> segments) : segs_(std::move(segments)) {
        if (segs_.empty()) throw std::invalid_argument("Domain: empty segment list");
        std::sort(segs_.begin(), segs_.end());
        double prev_end = -1.0;
        for (const auto& [a, b] : segs_) {
            if (!(a >= 0.0 && b <= 1.0)) throw std::invalid_argument("Domain: segment outside [0,1]");
            if (!(b > a)) throw std::invalid_argument("Domain: segment with nonpositive length");
            if (a < prev_end) throw std::invalid_argument("Domain: overlapping segments");
            prev_end = b;
        }
    }

    static Domain unit() { return Domain({{0.0, 1.0}}); }

    const std::vector<Segment>& segments() const { return segs_; }

    double measure() const {
        double m = 0.0;
        for (const auto& [a, b] : segs_) m += b - a;
        return m;
    }

    bool contains(double t) const {
        for (const auto& [a, b] : segs_)
            if (t >= a && t <= b) return true;
        return false;
    }

private:
    std::vector<Segment> segs_;
};

/// Function of bounded variation on [0,1]: a piecewise-polynomial part
/// (degree <= 3, pieces live on [t_i, t_{i+1}), the last piece closed)
/// plus a finite jump part sum_j h_j * chi_[a_j,1].
///
/// The jump convention is right-closed: chi_[a,1](a) = 1, so the value at a
/// discontinuity point belongs to the right branch and the left limit to the
/// left branch.  Piece mismatches at breakpoints follow the same convention
/// and count as jumps in the variation.
class BVFunction {
public:
    static constexpr int kMaxDegree = 3;

    BVFunction(std::vector<double> breakpoints, std::vector<Poly> pieces,
               std::vector<std::pair<double, double>> jumps = {})
        : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), jumps_(std::move(jumps)) {
        if (breaks_.size() < 2 || breaks_.front() != 0.0 || breaks_.back() != 1.0)
            throw std::invalid_argument("BVFunction: breakpoints must run from 0 to 1");
        for (std::size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i] > breaks_[i - 1]))
                throw std::invalid_argument("BVFunction: breakpoints not strictly increasing");
        if (pieces_.size() != breaks_.size() - 1)
            throw std::invalid_argument("BVFunction: piece/breakpoint count mismatch");
        for (auto& p : pieces_) {
            if (p.empty()) p = {0.0};
            if (p.size() > kMaxDegree + 1)
                throw std::invalid_argument("BVFunction: piece degree exceeds 3");
            for (double c : p)
                if (!std::isfinite(c)) throw std::invalid_argument("BVFunction: non-finite coefficient");
        }
        normalize_jumps();
    }

    /// The constant function value * e.
    static BVFunction constant(double value) { return BVFunction({0.0, 1.0}, {{value}}); }

    /// h * chi_[at,1].
    static BVFunction step(double at, double height) {
        if (at < 0.0 || at > 1.0) throw std::invalid_argument("step: location outside [0,1]");
        return BVFunction({0.0, 1.0}, {{0.0}}, {{at, height}});
    }

    /// Single polynomial piece on all of [0,1].
    static BVFunction from_poly(Poly coeffs) { return BVFunction({0.0, 1.0}, {std::move(coeffs)}); }

    /// Continuous piecewise-linear interpolant of the given points; the
    /// abscissae must be strictly increasing with t_0 = 0 and t_last = 1.
    static BVFunction polyline(std::span<const std::pair<double, double>> points) {
        if (points.size() < 2) throw std::invalid_argument("polyline: need at least two points");
        if (points.front().first != 0.0 || points.back().first != 1.0)
            throw std::invalid_argument("polyline: abscissae must span [0,1]");
        std::vector<double> bk;
        std::vector<Poly> pieces;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            const auto [t0, y0] = points[i];
            const auto [t1, y1] = points[i + 1];
            if (!(t1 > t0)) throw std::invalid_argument("polyline: abscissae not strictly increasing");
            const double slope = (y1 - y0) / (t1 - t0);
            bk.push_back(t0);
            pieces.push_back({y0 - slope * t0, slope});
        }
        bk.push_back(1.0);
        return BVFunction(std::move(bk), std::move(pieces));
    }

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<Poly>& pieces() const { return pieces_; }
    const std::vector<std::pair<double, double>>& jumps() const { return jumps_; }

    double operator()(double t) const {
        check_range(t);
        return poly_eval(pieces_[piece_index(t)], t) + step_sum_le(t);
    }

    /// Left limit f(t-) for t in (0,1].
    double left_limit(double t) const {
        check_range(t);
        if (t == 0.0) throw std::invalid_argument("left_limit: undefined at 0");
        std::size_t i = piece_index(t);
        if (i > 0 && breaks_[i] == t) --i;
        return poly_eval(pieces_[i], t) + step_sum_lt(t);
    }

    /// All discontinuity points in (0,1] with their heights f(p) - f(p-):
    /// explicit jumps merged with piece mismatches at breakpoints.
    std::vector<std::pair<double, double>> discontinuities() const {
        std::vector<std::pair<double, double>> out;
        for (const auto& [loc, h] : jumps_)
            if (loc > 0.0) out.push_back({loc, h});
        for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) {
            const double t = breaks_[i];
            const double mismatch = poly_eval(pieces_[i], t) - poly_eval(pieces_[i - 1], t);
            if (mismatch != 0.0) out.push_back({t, mismatch});
        }
        std::sort(out.begin(), out.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& [loc, h] : out) {
            if (!merged.empty() && merged.back().first == loc)
                merged.back().second += h;
            else
                merged.push_back({loc, h});
        }
        std::erase_if(merged, [](const auto& j) { return j.second == 0.0; });
        return merged;
    }

    bool is_continuous(double tol = 1e-10) const {
        for (const auto& [loc, h] : discontinuities())
            if (std::abs(h) > tol) return false;
        return true;
    }

    /// Exact integral over [lo, hi] (the jump part integrates as step areas).
    double integral(double lo, double hi) const {
        check_sub(lo, hi);
        double acc = 0.0;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const double a = std::max(lo, breaks_[i]);
            const double b = std::min(hi, breaks_[i + 1]);
            if (b > a) acc += poly_integral(pieces_[i], a, b);
        }
        for (const auto& [loc, h] : jumps_)
            if (loc < hi) acc += h * (hi - std::max(lo, loc));
        return acc;
    }

    /// Piecewise description of f restricted to open cells: the union of this
    /// function's breakpoints and discontinuity points.  On each open cell the
    /// function equals a single polynomial (piece + accumulated jump offset).
    std::vector<double> cell_boundaries() const {
        std::vector<double> pts = breaks_;
        for (const auto& [loc, h] : jumps_) pts.push_back(loc);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.front() != 0.0) pts.insert(pts.begin(), 0.0);
        if (pts.back() != 1.0) pts.push_back(1.0);
        return pts;
    }

    /// The polynomial equal to f on the open cell (a,b); the cell must not
    /// contain breakpoints or jump locations in its interior.
    Poly cell_poly(double a, double b) const {
        const double mid = 0.5 * (a + b);
        Poly p = pieces_[piece_index(mid)];
        const double offset = step_sum_le(mid);
        if (offset != 0.0) {
            if (p.empty()) p = {0.0};
            p[0] += offset;
        }
        return p;
    }

    friend BVFunction operator+(const BVFunction& f, const BVFunction& g) { return combine(f, g, 1.0, 1.0); }
    friend BVFunction operator-(const BVFunction& f, const BVFunction& g) { return combine(f, g, 1.0, -1.0); }
    friend BVFunction operator*(double s, const BVFunction& f) {
        std::vector<Poly> pieces = f.pieces_;
        for (auto& p : pieces)
            for (auto& c : p) c *= s;
        auto jumps = f.jumps_;
        for (auto& [loc, h] : jumps) h *= s;
        return BVFunction(f.breaks_, std::move(pieces), std::move(jumps));
    }
    friend BVFunction operator*(const BVFunction& f, double s) { return s * f; }

private:
    static void check_range(double t) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("BVFunction: argument outside [0,1]");
    }
    static void check_sub(double lo, double hi) {
        if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
            throw std::invalid_argument("BVFunction: malformed subinterval");
    }

    std::size_t piece_index(double t) const {
        // pieces are right-closed: t in [t_i, t_{i+1}) selects piece i
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
        if (i == 0) return 0;
        if (i >= breaks_.size()) return pieces_.size() - 1;
        return i - 1;
    }

    double step_sum_le(double t) const {
        double s = 0.0;
        for (const auto& [loc, h] : jumps_)
            if (loc <= t) s += h;
        return s;
    }
    double step_sum_lt(double t) const {
        double s = 0.0;
        for (const auto& [loc, h] : jumps_)
            if (loc < t) s += h;
        return s;
    }

    void normalize_jumps() {
        for (const auto& [loc, h] : jumps_) {
            if (loc < 0.0 || loc > 1.0) throw std::invalid_argument("BVFunction: jump outside [0,1]");
            if (!std::isfinite(h)) throw std::invalid_argument("BVFunction: non-finite jump height");
        }
        std::sort(jumps_.begin(), jumps_.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& [loc, h] : jumps_) {
            if (!merged.empty() && merged.back().first == loc)
                merged.back().second += h;
            else
                merged.push_back({loc, h});
        }
        std::erase_if(merged, [](const auto& j) { return j.second == 0.0; });
        jumps_ = std::move(merged);
    }

    static BVFunction combine(const BVFunction& f, const BVFunction& g, double sf, double sg) {
        std::vector<double> bk;
        bk.reserve(f.breaks_.size() + g.breaks_.size());
        std::merge(f.breaks_.begin(), f.breaks_.end(), g.breaks_.begin(), g.breaks_.end(),
                   std::back_inserter(bk));
        bk.erase(std::unique(bk.begin(), bk.end()), bk.end());
        std::vector<Poly> pieces;
        pieces.reserve(bk.size() - 1);
        for (std::size_t i = 0; i + 1 < bk.size(); ++i) {
            const double mid = 0.5 * (bk[i] + bk[i + 1]);
            pieces.push_back(poly_axpby(f.pieces_[f.piece_index(mid)],
                                        g.pieces_[g.piece_index(mid)], sf, sg));
        }
        std::vector<std::pair<double, double>> jumps = f.jumps_;
        for (auto& [loc, h] : jumps) h *= sf;
        for (const auto& [loc, h] : g.jumps_) jumps.push_back({loc, sg * h});
        return BVFunction(std::move(bk), std::move(pieces), std::move(jumps));
    }

    std::vector<double> breaks_;
    std::vector<Poly> pieces_;
    std::vector<std::pair<double, double>> jumps_;
};

/// Jordan variation over [lo, hi]: per-piece polynomial arc variation plus
/// |height| of every discontinuity point p with lo < p <= hi.
inline double variation(const BVFunction& f, double lo = 0.0, double hi = 1.0) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
        throw std::invalid_argument("variation: malformed subinterval");
    if (hi == lo) return 0.0;
    double var = 0.0;
    const auto& bk = f.breakpoints();
    const auto& pieces = f.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double a = std::max(lo, bk[i]);
        const double b = std::min(hi, bk[i + 1]);
        if (b > a) var += poly_variation(pieces[i], a, b);
    }
    for (const auto& [loc, h] : f.discontinuities())
        if (loc > lo && loc <= hi) var += std::abs(h);
    return var;
}

inline double bv_norm(const BVFunction& f) { return std::abs(f(0.0)) + variation(f); }

namespace detail {
/// Candidate evaluation points for extrema of f over [lo, hi]: endpoints,
/// interior breakpoints and jump locations, and per-piece derivative roots.
/// Left limits at discontinuities are reported separately.
inline void extremal_values(const BVFunction& f, double lo, double hi,
                            std::vector<double>& values) {
    const auto& bk = f.breakpoints();
    const auto& pieces = f.pieces();
    std::vector<double> pts{lo, hi};
    for (double t : bk)
        if (t > lo && t < hi) pts.push_back(t);
    for (const auto& [loc, h] : f.jumps())
        if (loc > lo && loc < hi) pts.push_back(loc);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double a = std::max(lo, bk[i]);
        const double b = std::min(hi, bk[i + 1]);
        if (b > a) poly_roots_in(poly_derivative(pieces[i]), a, b, pts);
    }
    for (double t : pts) values.push_back(f(t));
    for (const auto& [loc, h] : f.discontinuities())
        if (loc > lo && loc <= hi) values.push_back(f.left_limit(loc));
}
}  // namespace detail

/// Supremum of |f| over [0,1] (a true supremum: one-sided limits at
/// discontinuities are included).
inline double sup_norm(const BVFunction& f) {
    std::vector<double> vals;
    detail::extremal_values(f, 0.0, 1.0, vals);
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
}

/// Oscillation over [lo, hi]: sup |f(sigma) - f(tau)| = sup f - inf f.
inline double oscillation(const BVFunction& f, double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
        throw std::invalid_argument("oscillation: malformed subinterval");
    std::vector<double> vals;
    detail::extremal_values(f, lo, hi, vals);
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    return *mx - *mn;
}

/// Discrete image of a solver iterate: values at the uniform nodes t_i = i/n.
struct GridFunction {
    int n = 0;                   // interval count; values has n+1 entries
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(int intervals, std::vector<double> v) : n(intervals), values(std::move(v)) {
        if (n < 2) throw std::invalid_argument("GridFunction: need n >= 2");
        if (values.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("GridFunction: value count != n+1");
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite value");
    }

    static GridFunction constant(int intervals, double value) {
        return GridFunction(intervals, std::vector<double>(intervals + 1, value));
    }
    template <class F>
    static GridFunction sample(int intervals, F&& f) {
        std::vector<double> v(intervals + 1);
        for (int i = 0; i <= intervals; ++i) v[i] = f(static_cast<double>(i) / intervals);
        return GridFunction(intervals, std::move(v));
    }

    double node(int i) const { return static_cast<double>(i) / n; }

    /// Piecewise-linear interpolation.
    double operator()(double t) const {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("GridFunction: argument outside [0,1]");
        const double u = t * n;
        int i = static_cast<int>(u);
        if (i >= n) return values.back();
        const double w = u - i;
        return (1.0 - w) * values[i] + w * values[i + 1];
    }
};

inline double sup_norm(const GridFunction& x) {
    double m = 0.0;
    for (double v : x.values) m = std::max(m, std::abs(v));
    return m;
}

inline double sup_dist(const GridFunction& x, const GridFunction& y) {
    if (x.n != y.n) throw std::invalid_argument("sup_dist: nonconforming grids");
    double m = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i)
        m = std::max(m, std::abs(x.values[i] - y.values[i]));
    return m;
}

/// Grid analogue of the BV norm: |x_0| + sum |x_i - x_{i-1}|.  For sampled
/// functions this is a lower bound of the continuum norm.
inline double discrete_bv_norm(const GridFunction& x) {
    double s = std::abs(x.values[0]);
    for (int i = 1; i <= x.n; ++i) s += std::abs(x.values[i] - x.values[i - 1]);
    return s;
}

namespace detail {
/// Integrate g(x(t)) over domain ∩ grid cells with x piecewise linear;
/// splits each clipped cell at the interpolant's zero crossing so that
/// |x|^p stays smooth on every Simpson panel.
template <class G>
double grid_domain_integral(const GridFunction& x, const Domain& d, G&& g) {
    double acc = 0.0;
    for (const auto& [sa, sb] : d.segments()) {
        const int i0 = std::max(0, static_cast<int>(std::floor(sa * x.n)));
        const int i1 = std::min(x.n - 1, static_cast<int>(std::ceil(sb * x.n)) - 1);
        for (int i = i0; i <= i1; ++i) {
            const double a = std::max(sa, x.node(i));
            const double b = std::min(sb, x.node(i + 1));
            if (b <= a) continue;
            const double va = x(a), vb = x(b);
            std::vector<double> pts{a, b};
            if ((va < 0.0) != (vb < 0.0) && va != vb) {
                const double root = a + (b - a) * (va / (va - vb));
                if (root > a && root < b) pts.push_back(root);
            }
            std::sort(pts.begin(), pts.end());
            for (std::size_t k = 1; k < pts.size(); ++k)
                acc += simpson([&](double t) { return g(x(t)); }, pts[k - 1], pts[k], 1);
        }
    }
    return acc;
}
}  // namespace detail

/// ( integral over Omega_0 of |x|^p )^(1/p), p >= 1.
inline double lp_seminorm(const GridFunction& x, const Domain& d, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_seminorm: p must be >= 1");
    const double ip = detail::grid_domain_integral(
        x, d, [p](double v) { return std::pow(std::abs(v), p); });
    return std::pow(ip, 1.0 / p);
}

struct ConeCheck {
    double margin = 0.0;  // integral over Omega_0 of x, minus c * sup norm
    bool pass = false;
};

/// Membership check for the cone { x : int_{Omega_0} x >= c ||x||_inf }.
inline ConeCheck cone_check(const GridFunction& x, const Domain& d, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("cone_check: c must be positive");
    const double avg = detail::grid_domain_integral(x, d, [](double v) { return v; });
    ConeCheck r;
    r.margin = avg - c * sup_norm(x);
    r.pass = r.margin >= 0.0;
    return r;
}

}  // namespace hbv
