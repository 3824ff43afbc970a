#pragma once

#include <utility>
#include <vector>

#include "qsum/euler.hpp"
#include "qsum/qdiff_operator.hpp"
#include "qsum/quad.hpp"
#include "qsum/rational.hpp"

namespace qsum {

// Lower boundary of the convex hull of {(j, v0(a_j))} and its slopes, as
// exact fractions.
struct NewtonPolygon {
    std::vector<std::pair<long, long>> vertices;  // (shift exponent, valuation)
    std::vector<Rational> slopes;
};

inline NewtonPolygon newton_polygon(const QDifferenceOperator& L) {
    std::vector<std::pair<long, long>> pts;
    for (const auto& [j, a] : L.terms) {
        const int v = a.valuation();
        if (v == kInfiniteValuation) continue;  // zero coefficient: no point
        pts.emplace_back(j, v);
    }
    if (pts.size() < 2) throw DegenerateOperator("newton_polygon: need at least two terms");
    // pts are sorted by j (map order). Monotone-chain lower hull; a point on
    // the segment between its neighbors is not a vertex.
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep strictly convex turns only
            const long cross = (b.first - a.first) * (p.second - a.second) -
                               (b.second - a.second) * (p.first - a.first);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    NewtonPolygon np;
    np.vertices = std::move(hull);
    for (std::size_t i = 0; i + 1 < np.vertices.size(); ++i)
        np.slopes.emplace_back(np.vertices[i + 1].second - np.vertices[i].second,
                               np.vertices[i + 1].first - np.vertices[i].first);
    return np;
}

// Multisummation order: strictly increasing positive rationals s_1 < ... < s_r
// and the derived sequence 1/s~_i = 1/s_i - 1/s_{i+1}, with s_{r+1} = inf
// (so s~_r = s_r). Exact rational arithmetic throughout.
struct MultisumOrder {
    std::vector<Rational> s;
    std::vector<Rational> s_tilde;
};

inline MultisumOrder tilde_sequence(const std::vector<Rational>& s) {
    if (s.empty()) throw NotIncreasing("tilde_sequence: empty order");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(Rational(0) < s[i])) throw NotIncreasing("tilde_sequence: orders must be positive");
        if (i + 1 < s.size() && !(s[i] < s[i + 1]))
            throw NotIncreasing("tilde_sequence: orders must be strictly increasing");
    }
    MultisumOrder out;
    out.s = s;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        out.s_tilde.push_back(s[i] * s[i + 1] / (s[i + 1] - s[i]));
    out.s_tilde.push_back(s.back());
    return out;
}

// The analytically continued Borel transform B_{q;s1}(f) along a direction,
// supplied in closed/recursive form by the caller, with its Taylor data at 0.
struct BorelGerm {
    ScaledFunction fn;
    FormalSeries taylor;
    double radius = 1.0;
};

// Multisum pipeline S^d_{q;s}(f) = L_{q;s~_r} o ... o L_{q;s~_1} applied to
// the germ, evaluated through `stages` Laplace transforms (all of them by
// default). Intermediate stages are the Prop-style partial sums. A window
// failure reports which stage diverged.
inline ScaledComplex multisum_stage_scaled(const BorelGerm& germ, const MultisumOrder& order,
                                           int stages, Direction d, const QContext& ctx,
                                           const LogPoint& x, const QuadratureConfig& cfg = {}) {
    if (stages < 1 || stages > static_cast<int>(order.s_tilde.size()))
        throw Error("multisum: bad stage count");
    // Build the stage-j function recursively; each evaluation of stage j is a
    // Laplace quadrature over stage j-1.
    std::function<ScaledComplex(int, const LogPoint&)> eval =
        [&](int j, const LogPoint& p) -> ScaledComplex {
        if (j == 0) return germ.fn(p);
        const TransformOrder k{order.s_tilde[static_cast<std::size_t>(j - 1)]};
        try {
            return laplace_numeric_scaled(
                [&](const LogPoint& y) { return eval(j - 1, y); }, d, ctx, k, p, cfg);
        } catch (const WindowExhausted& e) {
            if (e.stage >= 0) throw;  // deeper stage already identified
            throw WindowExhausted(std::string("multisum stage ") + std::to_string(j) + ": " +
                                      e.what(),
                                  j);
        }
    };
    return eval(stages, x);
}

inline Complex multisum(const BorelGerm& germ, const MultisumOrder& order, Direction d,
                        const QContext& ctx, const LogPoint& x,
                        const QuadratureConfig& cfg = {}) {
    return multisum_stage_scaled(germ, order, static_cast<int>(order.s_tilde.size()), d, ctx, x,
                                 cfg)
        .value();
}

// --- algebraic-property battery ---------------------------------------------

// Deviations of the summation process from additivity, sigma_q-equivariance
// and convergent-factor pull-out, measured on Euler sums over a grid.
struct MorphismReport {
    double additivity = 0.0;
    double equivariance = 0.0;
    double pullout = 0.0;

    double max() const { return std::max({additivity, equivariance, pullout}); }
};

inline MorphismReport morphism_checks(const EulerFactor& f1, const EulerFactor& f2, Direction d,
                                      const QContext& ctx, const std::vector<LogPoint>& grid,
                                      const QuadratureConfig& cfg = {}) {
    MorphismReport rep;
    const auto g1 = euler_borel(f1);
    const auto g2 = euler_borel(f2);
    for (const auto& x : grid) {
        // additivity: S(germ1 + germ2) vs S(germ1) + S(germ2)
        const Complex s1 = euler_sum(f1, d, ctx, x, cfg);
        const Complex s2 = euler_sum(f2, d, ctx, x, cfg);
        const Complex s12 = laplace_numeric(
            [&](const LogPoint& xi) { return g1(xi) + g2(xi); }, d, ctx, TransformOrder{}, x, cfg);
        rep.additivity = std::max(rep.additivity, std::abs(s12 - (s1 + s2)));

        // sigma_q-equivariance: B(sigma_q f)(xi) = B(f)(q xi) for slope-1
        // germs, so S(sigma_q f)(x) must equal S(f)(qx).
        const Complex seq = laplace_numeric(
            [&](const LogPoint& xi) { return g1(xi.scaled(ctx.q)); }, d, ctx, TransformOrder{}, x,
            cfg);
        const Complex sqx = euler_sum(f1, d, ctx, x.scaled(ctx.q), cfg);
        rep.equivariance = std::max(rep.equivariance, std::abs(seq - sqx));

        // pull-out of the convergent factor p(x) = 1 + x:
        // B((1 + x) f)(xi) = B(f)(xi) + xi B(f)(xi/q), and
        // S((1+x) f)(x) = (1 + x) S(f)(x).
        const Complex spg = laplace_numeric(
            [&](const LogPoint& xi) {
                return g1(xi) + g1(xi.scaled(1.0 / ctx.q)) * xi.to_complex();
            },
            d, ctx, TransformOrder{}, x, cfg);
        const Complex want = (Complex{1.0} + x.to_complex()) * s1;
        rep.pullout = std::max(rep.pullout, std::abs(spg - want));
    }
    return rep;
}

}  // namespace qsum
