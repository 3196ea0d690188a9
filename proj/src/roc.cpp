#include "froc/roc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "froc/tolerance.hpp"

namespace froc {

std::vector<std::size_t> RocCurve::monotonicity_violations() const {
    std::vector<std::size_t> bad;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].fpr < points[i - 1].fpr || points[i].tpr < points[i - 1].tpr)
            bad.push_back(i);
    }
    return bad;
}

RocCurve empirical_roc(const GroupedScores& data, int group, const QueryGrid& grid) {
    std::vector<double> pos, neg;
    bool group_seen = false;
    for (const ScoreRow& r : data.rows) {
        if (r.group != group) continue;
        group_seen = true;
        (r.label == 1 ? pos : neg).push_back(r.score);
    }
    if (!group_seen)
        throw DataError("empirical_roc: group " + std::to_string(group) + " absent from data");
    if (pos.empty())
        throw DataError("empirical_roc: group " + std::to_string(group) + " has no positive labels");
    if (neg.empty())
        throw DataError("empirical_roc: group " + std::to_string(group) + " has no negative labels");

    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    const auto frac_at_or_above = [](const std::vector<double>& v, double t) {
        const auto it = std::lower_bound(v.begin(), v.end(), t);
        return static_cast<double>(v.end() - it) / static_cast<double>(v.size());
    };

    // Highest threshold first gives nondecreasing fpr along the sequence.
    RocCurve curve;
    curve.points.reserve(static_cast<std::size_t>(grid.k));
    for (int i = grid.k; i >= 1; --i) {
        const double t = grid.threshold(i);
        curve.points.push_back({frac_at_or_above(neg, t), frac_at_or_above(pos, t)});
    }
    return curve;
}

RocCurve pla(const RocCurve& curve) {
    const auto bad = curve.monotonicity_violations();
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "pla: monotonicity violated at indices";
        for (std::size_t i : bad) msg << ' ' << i;
        throw std::invalid_argument(msg.str());
    }
    RocCurve out;
    out.points.reserve(curve.points.size());
    for (const RocPoint& p : curve.points) {
        if (out.points.empty() || !(out.points.back() == p)) out.points.push_back(p);
    }
    return out;
}

double interpolate_sorted(const std::vector<RocPoint>& pts, double fpr) {
    const auto less_fpr = [](const RocPoint& p, double x) { return p.fpr < x; };
    const auto it = std::lower_bound(pts.begin(), pts.end(), fpr, less_fpr);
    std::size_t i = static_cast<std::size_t>(it - pts.begin());

    if (i < pts.size() && pts[i].fpr == fpr) {
        // Vertical run: report the maximum tpr at this abscissa.
        double best = pts[i].tpr;
        for (std::size_t j = i + 1; j < pts.size() && pts[j].fpr == fpr; ++j)
            best = std::max(best, pts[j].tpr);
        return best;
    }
    if (i == 0) return pts.front().tpr;
    if (i == pts.size()) return pts.back().tpr;
    const RocPoint& a = pts[i - 1];
    const RocPoint& b = pts[i];
    const double u = (fpr - a.fpr) / (b.fpr - a.fpr);
    return a.tpr + u * (b.tpr - a.tpr);
}

double interpolate(const RocCurve& curve, double fpr) {
    return interpolate_sorted(curve.anchored(), fpr);
}

double polyline_area(const std::vector<RocPoint>& pts) {
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        area += (pts[i].fpr - pts[i - 1].fpr) * (pts[i].tpr + pts[i - 1].tpr) * 0.5;
    return area;
}

double auc(const RocCurve& curve) { return polyline_area(curve.anchored()); }

double pla_loss_bound(const SlopeBounds& bounds, int k) {
    if (k < 1) throw std::invalid_argument("pla_loss_bound: k must be >= 1");
    return bounds.u_t * bounds.u_f / (2.0 * k);
}

SlopeBounds estimate_slope_bounds(const RocCurve& curve, const QueryGrid& grid) {
    SlopeBounds b;
    const double dt = 1.0 / grid.k;
    // Curve order is descending threshold; adjacent points are 1/k apart in t.
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        b.u_f = std::max(b.u_f, std::abs(curve.points[i].fpr - curve.points[i - 1].fpr) / dt);
        b.u_t = std::max(b.u_t, std::abs(curve.points[i].tpr - curve.points[i - 1].tpr) / dt);
    }
    return b;
}

DominanceResult dominance(const RocCurve& curve0, const RocCurve& curve1, int grid_resolution) {
    if (grid_resolution < 2) throw std::invalid_argument("dominance: grid_resolution must be >= 2");
    const double tol = predicate_tol();

    const std::vector<RocPoint> pts0 = curve0.anchored();
    const std::vector<RocPoint> pts1 = curve1.anchored();

    DominanceResult res;
    bool c0_above_all = true;
    bool c1_above_all = true;
    int prev_sign = 0;
    std::vector<bool> crossing_in_corner;
    for (int i = 0; i < grid_resolution; ++i) {
        const double x = static_cast<double>(i) / (grid_resolution - 1);
        const double y0 = interpolate_sorted(pts0, x);
        const double y1 = interpolate_sorted(pts1, x);
        const double d = y1 - y0;
        if (d > tol) c0_above_all = false;
        if (d < -tol) c1_above_all = false;
        const int sign = d > tol ? 1 : (d < -tol ? -1 : 0);
        if (sign != 0) {
            if (prev_sign != 0 && sign != prev_sign) {
                res.crossing_fprs.push_back(x);
                crossing_in_corner.push_back(x <= 0.2 || std::min(y0, y1) >= 0.5);
            }
            prev_sign = sign;
        }
    }

    if (c0_above_all) {
        res.kind = DominanceResult::Kind::Curve0Up;  // ties land here
    } else if (c1_above_all) {
        res.kind = DominanceResult::Kind::Curve1Up;
    } else {
        res.kind = DominanceResult::Kind::Intersecting;
        res.crossings_corner_confined =
            !crossing_in_corner.empty() &&
            std::all_of(crossing_in_corner.begin(), crossing_in_corner.end(),
                        [](bool v) { return v; });
    }
    return res;
}

} // namespace froc
