#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hbv/bvfun.hpp"
#include "hbv/poly.hpp"

namespace hbv {

/// int_0^1 x dA for continuous x: the jump masses of A act as point
/// evaluations and the smooth part integrates against its density.
inline double rs_dA(const BVFunction& x, const BVFunction& A) {
    if (!x.is_continuous()) throw std::invalid_argument("rs_dA: integrand x must be continuous");
    double acc = 0.0;
    for (const auto& [loc, h] : A.discontinuities()) acc += h * x(loc);
    std::vector<double> cells = x.cell_boundaries();
    for (double b : A.cell_boundaries()) cells.push_back(b);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const double a = cells[i - 1], b = cells[i];
        const Poly dA = poly_derivative(A.cell_poly(a, b));
        if (dA.empty()) continue;
        acc += poly_integral(poly_mul(x.cell_poly(a, b), dA), a, b);
    }
    return acc;
}

/// int_0^1 A dx for continuous piecewise-C^1 x: sum over pieces of the exact
/// integral of A times the piece density x'.
inline double rs_dx(const BVFunction& A, const BVFunction& x) {
    if (!x.is_continuous()) throw std::invalid_argument("rs_dx: integrator x must be continuous");
    double acc = 0.0;
    std::vector<double> cells = x.cell_boundaries();
    for (double b : A.cell_boundaries()) cells.push_back(b);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const double a = cells[i - 1], b = cells[i];
        const Poly dx = poly_derivative(x.cell_poly(a, b));
        if (dx.empty()) continue;
        acc += poly_integral(poly_mul(A.cell_poly(a, b), dx), a, b);
    }
    return acc;
}

/// Riemann-Stieltjes sum  sum_i A(tag_i) (x(t_i) - x(t_{i-1})) over a tagged
/// partition of [0,1].  Shared discontinuity points of A and x make the
/// integral ill-defined, so they are rejected loudly.
inline double rs_sum(const BVFunction& A, const BVFunction& x,
                     std::span<const double> partition, std::span<const double> tags) {
    if (partition.size() < 2 || partition.front() != 0.0 || partition.back() != 1.0)
        throw std::invalid_argument("rs_sum: partition must run from 0 to 1");
    if (tags.size() + 1 != partition.size())
        throw std::invalid_argument("rs_sum: need one tag per subinterval");
    for (std::size_t i = 1; i < partition.size(); ++i) {
        if (!(partition[i] > partition[i - 1]))
            throw std::invalid_argument("rs_sum: partition not strictly increasing");
        if (!(tags[i - 1] >= partition[i - 1] && tags[i - 1] <= partition[i]))
            throw std::invalid_argument("rs_sum: tag outside its subinterval");
    }
    const auto discA = A.discontinuities();
    if (!discA.empty())
        for (const auto& [loc, h] : x.discontinuities())
            for (const auto& [locA, hA] : discA)
                if (loc == locA && std::abs(h) > 1e-12)
                    throw std::invalid_argument("rs_sum: A and x share a discontinuity point");
    double acc = 0.0;
    for (std::size_t i = 1; i < partition.size(); ++i)
        acc += A(tags[i - 1]) * (x(partition[i]) - x(partition[i - 1]));
    return acc;
}

/// Continuous linear functional on CBV[0,1]: a Riemann-Stieltjes integral in
/// either orientation or a finite point combination  sum_i w_i x(a_i).
class Functional {
public:
    enum class Kind { StieltjesDx, StieltjesDA, PointCombo };

    static Functional stieltjes_dx(BVFunction A) { return Functional(Kind::StieltjesDx, std::move(A)); }
    static Functional stieltjes_dA(BVFunction A) { return Functional(Kind::StieltjesDA, std::move(A)); }
    static Functional point_combo(std::vector<std::pair<double, double>> weight_node) {
        for (const auto& [w, a] : weight_node)
            if (a < 0.0 || a > 1.0)
                throw std::invalid_argument("point_combo: node outside [0,1]");
        Functional f(Kind::PointCombo, std::nullopt);
        f.points_ = std::move(weight_node);
        f.merge_points();
        return f;
    }
    static Functional zero() { return point_combo({}); }

    Kind kind() const { return kind_; }
    const BVFunction& integrator() const {
        if (!a_) throw std::logic_error("Functional: no integrator function");
        return *a_;
    }
    const std::vector<std::pair<double, double>>& points() const { return points_; }

    double operator()(const BVFunction& x) const {
        switch (kind_) {
            case Kind::StieltjesDx: return rs_dx(*a_, x);
            case Kind::StieltjesDA: return rs_dA(x, *a_);
            case Kind::PointCombo: {
                double acc = 0.0;
                for (const auto& [w, a] : points_) acc += w * x(a);
                return acc;
            }
        }
        return 0.0;
    }

    /// Evaluation on a grid iterate, with x understood as its piecewise-linear
    /// interpolant; the Stieltjes integrals against A stay exact per cell.
    double operator()(const GridFunction& x) const {
        switch (kind_) {
            case Kind::PointCombo: {
                double acc = 0.0;
                for (const auto& [w, a] : points_) acc += w * x(a);
                return acc;
            }
            case Kind::StieltjesDx: {
                double acc = 0.0;
                for (int i = 0; i < x.n; ++i) {
                    const double a = x.node(i), b = x.node(i + 1);
                    const double slope = (x.values[i + 1] - x.values[i]) * x.n;
                    acc += slope * a_->integral(a, b);
                }
                return acc;
            }
            case Kind::StieltjesDA: {
                double acc = 0.0;
                for (const auto& [loc, h] : a_->discontinuities()) acc += h * x(loc);
                std::vector<double> cells = a_->cell_boundaries();
                for (int i = 1; i < x.n; ++i) cells.push_back(x.node(i));
                std::sort(cells.begin(), cells.end());
                cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
                for (std::size_t i = 1; i < cells.size(); ++i) {
                    const double a = cells[i - 1], b = cells[i];
                    const Poly dA = poly_derivative(a_->cell_poly(a, b));
                    if (dA.empty()) continue;
                    const double mid = 0.5 * (a + b);
                    const double slope = (x(b) - x(a)) / (b - a);
                    const Poly xlin{x(mid) - slope * mid, slope};
                    acc += poly_integral(poly_mul(xlin, dA), a, b);
                }
                return acc;
            }
        }
        return 0.0;
    }

    Functional operator-(const Functional& other) const {
        if (kind_ != other.kind_)
            throw std::invalid_argument("Functional: cannot combine different kinds");
        if (kind_ == Kind::PointCombo) {
            auto pts = points_;
            for (const auto& [w, a] : other.points_) pts.push_back({-w, a});
            return point_combo(std::move(pts));
        }
        Functional f(kind_, *a_ - *other.a_);
        return f;
    }

    /// Certified upper bound for the operator norm on CBV[0,1].
    ///   dA form:     var A            (|int x dA| <= ||x||_inf var A)
    ///   points:      sum |w_i|        (||x||_inf <= ||x||_BV)
    ///   dx form:     2||A||_inf + |A(0)| + |A(1)|, via integration by parts;
    ///                an upper bound only, reported as such.
    double norm_upper() const {
        switch (kind_) {
            case Kind::StieltjesDA: return variation(*a_);
            case Kind::PointCombo: {
                double s = 0.0;
                for (const auto& [w, a] : points_) s += std::abs(w);
                return s;
            }
            case Kind::StieltjesDx:
                return 2.0 * sup_norm(*a_) + std::abs((*a_)(0.0)) + std::abs((*a_)(1.0));
        }
        return 0.0;
    }

    std::string norm_upper_note() const {
        switch (kind_) {
            case Kind::StieltjesDA: return "var A bound";
            case Kind::PointCombo: return "sum |weights| via ||x||_inf <= ||x||_BV";
            case Kind::StieltjesDx: return "integration-by-parts bound (upper bound only)";
        }
        return {};
    }

private:
    Functional(Kind k, std::optional<BVFunction> a) : kind_(k), a_(std::move(a)) {}

    void merge_points() {
        std::sort(points_.begin(), points_.end(),
                  [](const auto& l, const auto& r) { return l.second < r.second; });
        std::vector<std::pair<double, double>> merged;
        for (const auto& [w, a] : points_) {
            if (!merged.empty() && merged.back().second == a)
                merged.back().first += w;
            else
                merged.push_back({w, a});
        }
        std::erase_if(merged, [](const auto& p) { return p.first == 0.0; });
        points_ = std::move(merged);
    }

    Kind kind_;
    std::optional<BVFunction> a_;
    std::vector<std::pair<double, double>> points_;  // (weight, node)
};

inline double functional_norm_upper(const Functional& f) { return f.norm_upper(); }

/// Certified lower bound for ||F||: the best Rayleigh-type quotient
/// |F[x]| / ||x||_BV over a finite family of nonzero test functions.
inline double functional_norm_witness(const Functional& f, std::span<const BVFunction> family) {
    if (family.empty()) throw std::invalid_argument("functional_norm_witness: empty family");
    double best = 0.0;
    for (const auto& x : family) {
        const double nx = bv_norm(x);
        if (nx <= 1e-15) throw std::invalid_argument("functional_norm_witness: zero-norm member");
        best = std::max(best, std::abs(f(x)) / nx);
    }
    return best;
}

/// Default witness family: 0/1-valued polylines switching at the functional's
/// nodes (point masses or jump locations of the integrator), plus e and the
/// identity.  For two-node point functionals this contains the extremal
/// polyline through (0,0),(a,0),(c,1),(1,1).
inline std::vector<BVFunction> default_witness_family(const Functional& f) {
    std::vector<double> nodes;
    switch (f.kind()) {
        case Functional::Kind::PointCombo:
            for (const auto& [w, a] : f.points()) nodes.push_back(a);
            break;
        case Functional::Kind::StieltjesDA:
        case Functional::Kind::StieltjesDx:
            for (const auto& [loc, h] : f.integrator().discontinuities()) nodes.push_back(loc);
            break;
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::erase_if(nodes, [](double a) { return a <= 0.0 || a >= 1.0; });

    std::vector<BVFunction> family;
    family.push_back(BVFunction::constant(1.0));
    family.push_back(BVFunction::from_poly({0.0, 1.0}));
    const std::size_t m = std::min<std::size_t>(nodes.size(), 10);
    for (std::size_t mask = 1; m > 0 && mask < (std::size_t{1} << m); ++mask) {
        std::vector<std::pair<double, double>> pts;
        pts.push_back({0.0, (mask & 1) ? 1.0 : 0.0});
        for (std::size_t i = 0; i < m; ++i)
            pts.push_back({nodes[i], (mask >> i & 1) ? 1.0 : 0.0});
        pts.push_back({1.0, (mask >> (m - 1) & 1) ? 1.0 : 0.0});
        family.push_back(BVFunction::polyline(pts));
    }
    return family;
}

}  // namespace hbv
