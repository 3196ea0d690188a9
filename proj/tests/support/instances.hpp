#ifndef FROC_TESTS_INSTANCES_HPP
#define FROC_TESTS_INSTANCES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "froc/rng.hpp"
#include "froc/roc.hpp"

namespace froc::testing {

struct InstancePair {
    RocCurve up;
    RocCurve down;
};

inline std::vector<double> sorted_uniform(SplitMix64& rng, int n, double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.uniform(lo, hi);
    std::sort(v.begin(), v.end());
    return v;
}

// Curve pair sharing fpr knots, with up at least `margin` above down at
// every knot (hence everywhere: both PLAs are linear between the same
// knots). The down curve stays at or above the diagonal, the usual ROC
// shape, which also keeps every shift target realizable by mixtures over
// {reject, accept, threshold} classifiers.
inline InstancePair shared_knot_instance(SplitMix64& rng, int k, double margin = 0.02) {
    const double cap = 0.96;
    const std::vector<double> xs = sorted_uniform(rng, k, 0.01, 0.82);

    InstancePair inst;
    inst.down.points.reserve(static_cast<std::size_t>(k));
    inst.up.points.reserve(static_cast<std::size_t>(k));
    double down_prev = 0.0, up_prev = 0.0;
    for (int i = 0; i < k; ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        const double d =
            std::min(std::max(down_prev, x + rng.uniform(0.01, 0.12)), 0.9);
        down_prev = d;
        const double u = std::min(std::max(up_prev, d + margin + 0.25 * rng.uniform()), cap);
        up_prev = u;
        inst.down.points.push_back({x, d});
        inst.up.points.push_back({x, u});
    }
    return inst;
}

// Curve pair with independent fpr knots; up vertices are placed above the
// down PLA and the pair is rejected unless up dominates on a dense grid.
inline InstancePair independent_knot_instance(SplitMix64& rng, int k, double margin = 0.03) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double cap = 0.96;
        const std::vector<double> xd = sorted_uniform(rng, k, 0.01, 0.82);
        InstancePair inst;
        double down_prev = 0.0;
        for (int i = 0; i < k; ++i) {
            const double x = xd[static_cast<std::size_t>(i)];
            const double d =
                std::min(std::max(down_prev, x + rng.uniform(0.01, 0.12)), 0.9);
            down_prev = d;
            inst.down.points.push_back({x, d});
        }

        const std::vector<RocPoint> down_pts = inst.down.anchored();
        const std::vector<double> xu = sorted_uniform(rng, k, 0.01, 0.82);
        double up_prev = 0.0;
        for (int i = 0; i < k; ++i) {
            const double x = xu[static_cast<std::size_t>(i)];
            double u = std::max(up_prev,
                                interpolate_sorted(down_pts, x) + margin + 0.2 * rng.uniform());
            u = std::min(u, cap);
            up_prev = u;
            inst.up.points.push_back({x, u});
        }
        const DominanceResult dom = dominance(inst.up, inst.down);
        if (dom.kind == DominanceResult::Kind::Curve0Up) return inst;
    }
    throw std::runtime_error("independent_knot_instance: rejection sampling failed");
}

// Near-parallel concave pair over the practitioner band: mild decreasing
// slopes, knots away from the corners, and a vertical gap that drifts
// slowly between 0.6*eps and 1.4*eps. In this regime the per-index
// decisions against original neighbors coincide with the joint optimum,
// which is what the optimality statement can certify.
inline InstancePair near_parallel_instance(SplitMix64& rng, int k, double eps) {
    while (true) {
        const std::vector<double> xs = sorted_uniform(rng, k, 0.12, 0.88);
        std::vector<double> slope(static_cast<std::size_t>(k) + 1);
        for (double& m : slope) m = rng.uniform(0.5, 1.7);
        std::sort(slope.rbegin(), slope.rend());
        std::vector<double> ys(static_cast<std::size_t>(k));
        double y = 0.0, x_prev = 0.0;
        for (int i = 0; i < k; ++i) {
            y += slope[static_cast<std::size_t>(i)] * (xs[static_cast<std::size_t>(i)] - x_prev);
            ys[static_cast<std::size_t>(i)] = y;
            x_prev = xs[static_cast<std::size_t>(i)];
        }
        y += slope[static_cast<std::size_t>(k)] * (1.0 - x_prev);
        for (double& v : ys) v /= y;
        if (ys[0] < 1.4 * eps + 0.03) continue;  // keep the gap off the floor

        InstancePair inst;
        double d = rng.uniform(0.6 * eps, 1.4 * eps);
        double prev = 0.0;
        for (int i = 0; i < k; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            d = std::clamp(d + rng.uniform(-0.03 * eps, 0.03 * eps), 0.6 * eps, 1.4 * eps);
            const double yd = std::min(std::max(prev, ys[u] - d), ys[u]);
            prev = yd;
            inst.up.points.push_back({xs[u], ys[u]});
            inst.down.points.push_back({xs[u], yd});
        }
        return inst;
    }
}

// Shared knots slightly jittered on the up curve, staying within the
// neighbors' fpr range so the spacing condition keeps holding.
inline InstancePair jittered_knot_instance(SplitMix64& rng, int k, double margin = 0.02) {
    InstancePair inst = shared_knot_instance(rng, k, margin);
    for (int i = 0; i < k; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const double lo = i == 0 ? 0.0 : inst.down.points[ui - 1].fpr;
        const double hi = i + 1 == k ? 1.0 : inst.down.points[ui + 1].fpr;
        const double x = inst.up.points[ui].fpr;
        const double span = 0.25 * std::min(x - lo, hi - x);
        inst.up.points[ui].fpr = x + rng.uniform(-span, span);
    }
    // Jitter cannot reorder (each point stays between its down neighbors),
    // but re-check dominance and fall back to the shared pair when lost.
    InstancePair shared = inst;
    const DominanceResult dom = dominance(inst.up, inst.down);
    if (dom.kind != DominanceResult::Kind::Curve0Up) {
        for (int i = 0; i < k; ++i)
            inst.up.points[static_cast<std::size_t>(i)].fpr =
                inst.down.points[static_cast<std::size_t>(i)].fpr;
    }
    return inst;
}

// Concave dominant pair: the up curve has strictly decreasing segment
// slopes through the anchors (a proper ROC shape), the down curve scales
// its tprs by a factor below one. Chords of points under a concave curve
// stay under it, so dominance holds everywhere and any polyline through
// hypograph points keeps area at most auc(up).
inline InstancePair concave_instance(SplitMix64& rng, int k, bool jitter_up = false) {
    const std::vector<double> xs = sorted_uniform(rng, k, 0.02, 0.98);
    std::vector<double> slope(static_cast<std::size_t>(k) + 1);
    for (double& m : slope) m = rng.uniform(0.05, 1.0);
    std::sort(slope.rbegin(), slope.rend());

    std::vector<double> ys(static_cast<std::size_t>(k));
    double y = 0.0, x_prev = 0.0;
    for (int i = 0; i < k; ++i) {
        y += slope[static_cast<std::size_t>(i)] * (xs[static_cast<std::size_t>(i)] - x_prev);
        ys[static_cast<std::size_t>(i)] = y;
        x_prev = xs[static_cast<std::size_t>(i)];
    }
    y += slope[static_cast<std::size_t>(k)] * (1.0 - x_prev);
    for (double& v : ys) v /= y;

    InstancePair inst;
    const double gamma = rng.uniform(0.55, 0.9);
    for (int i = 0; i < k; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        inst.up.points.push_back({xs[u], ys[u]});
        inst.down.points.push_back({xs[u], gamma * ys[u]});
    }
    if (jitter_up) {
        // Move up knots within their down neighbors' fpr range (keeps the
        // spacing condition) and re-read the tpr off the concave chain.
        const std::vector<RocPoint> chain = inst.up.anchored();
        for (int i = 0; i < k; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            const double lo = i == 0 ? 0.0 : inst.down.points[u - 1].fpr;
            const double hi = i + 1 == k ? 1.0 : inst.down.points[u + 1].fpr;
            const double x = inst.up.points[u].fpr;
            const double span = 0.3 * std::min(x - lo, hi - x);
            const double nx = x + rng.uniform(-span, span);
            inst.up.points[u] = {nx, interpolate_sorted(chain, nx)};
        }
    }
    return inst;
}

// Strictly concave, strictly increasing curve (power-law in fpr); used
// where refinement or uniqueness arguments need concavity.
inline RocCurve concave_curve(int k, double exponent = 0.5) {
    RocCurve c;
    for (int i = 1; i <= k; ++i) {
        const double x = static_cast<double>(i) / (k + 1);
        c.points.push_back({x, std::pow(x, exponent)});
    }
    return c;
}

// Shoelace area of a simple polygon in traversal order; the independent
// oracle for the Heron-split quadrilateral areas.
inline double shoelace_area(const std::vector<RocPoint>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const RocPoint& p = poly[i];
        const RocPoint& q = poly[(i + 1) % poly.size()];
        s += p.fpr * q.tpr - q.fpr * p.tpr;
    }
    return std::abs(s) * 0.5;
}

// Convex quadrilateral: four sorted angles on one ellipse.
inline std::vector<RocPoint> random_convex_quad(SplitMix64& rng) {
    const double cx = rng.uniform(0.35, 0.65), cy = rng.uniform(0.35, 0.65);
    const double rx = rng.uniform(0.05, 0.3), ry = rng.uniform(0.05, 0.3);
    std::vector<double> ang(4);
    for (double& a : ang) a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    std::sort(ang.begin(), ang.end());
    std::vector<RocPoint> quad;
    for (double a : ang) quad.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
    return quad;
}

} // namespace froc::testing

#endif
