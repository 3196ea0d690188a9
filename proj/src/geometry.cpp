#include "froc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "froc/tolerance.hpp"

namespace froc {

NormRhombus norm_rhombus(const RocPoint& center, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("norm_rhombus: eps must be > 0");
    NormRhombus rh;
    rh.center = center;
    rh.eps = eps;
    rh.u = {center.fpr, center.tpr + eps};
    rh.r = {center.fpr + eps, center.tpr};
    rh.d = {center.fpr, center.tpr - eps};
    rh.l = {center.fpr - eps, center.tpr};
    return rh;
}

namespace {

// L1 distance from the rhombus center along segment a->b is piecewise
// linear in the parameter t, with breakpoints where either coordinate
// crosses the center. Solving d(t) = eps piece by piece finds every
// boundary intersection, including tangencies and collinear overlaps,
// without case analysis on the rhombus edges.
void collect_boundary_hits(const RocPoint& a, const RocPoint& b, const NormRhombus& rh,
                           std::vector<RocPoint>& out) {
    const double tol = predicate_tol();
    const double dx = b.fpr - a.fpr;
    const double dy = b.tpr - a.tpr;

    double cuts[4] = {0.0, 1.0, 1.0, 1.0};
    int n = 2;
    if (dx != 0.0) {
        const double t = (rh.center.fpr - a.fpr) / dx;
        if (t > 0.0 && t < 1.0) cuts[n++] = t;
    }
    if (dy != 0.0) {
        const double t = (rh.center.tpr - a.tpr) / dy;
        if (t > 0.0 && t < 1.0) cuts[n++] = t;
    }
    std::sort(cuts, cuts + n);

    const auto point_at = [&](double t) -> RocPoint {
        return {a.fpr + t * dx, a.tpr + t * dy};
    };
    const auto dist_at = [&](double t) {
        const RocPoint p = point_at(t);
        return l1_distance(p, rh.center);
    };

    for (int i = 0; i + 1 < n; ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        const double dlo = dist_at(lo), dhi = dist_at(hi);
        const double slope = (dhi - dlo) / (hi - lo);
        if (std::abs(dhi - dlo) <= tol) {
            // Distance constant on this piece; on the boundary it is a
            // collinear overlap, contributing both endpoints.
            if (std::abs(dlo - rh.eps) <= tol) {
                out.push_back(point_at(lo));
                out.push_back(point_at(hi));
            }
            continue;
        }
        double t = lo + (rh.eps - dlo) / slope;
        const double t_slack = tol / std::abs(slope);
        if (t < lo - t_slack || t > hi + t_slack) continue;
        t = std::clamp(t, lo, hi);
        out.push_back(point_at(t));
    }
}

void dedup_points(std::vector<RocPoint>& pts) {
    const double tol = predicate_tol();
    std::sort(pts.begin(), pts.end(), [](const RocPoint& p, const RocPoint& q) {
        return p.fpr < q.fpr || (p.fpr == q.fpr && p.tpr < q.tpr);
    });
    std::vector<RocPoint> uniq;
    for (const RocPoint& p : pts) {
        if (uniq.empty() || l1_distance(uniq.back(), p) > 2.0 * tol) uniq.push_back(p);
    }
    pts.swap(uniq);
}

} // namespace

std::vector<RocPoint> segment_rhombus_intersections(const Segment& s, const NormRhombus& rhombus) {
    std::vector<RocPoint> hits;
    collect_boundary_hits(s.a, s.b, rhombus, hits);
    dedup_points(hits);
    return hits;
}

std::vector<RocPoint> rhombus_intersections_range(const std::vector<RocPoint>& verts,
                                                  std::size_t lo, std::size_t hi,
                                                  const NormRhombus& rhombus) {
    std::vector<RocPoint> hits;
    for (std::size_t i = lo; i < hi; ++i) {
        const RocPoint& a = verts[i];
        const RocPoint& b = verts[i + 1];
        if (a == b) continue;
        collect_boundary_hits(a, b, rhombus, hits);
    }
    dedup_points(hits);
    return hits;
}

bool boundary_cut(const RocCurve& roc_up, const NormRhombus& rhombus) {
    const std::vector<RocPoint> verts = roc_up.anchored();
    return !rhombus_intersections_range(verts, 0, verts.size() - 1, rhombus).empty();
}

CutResult cut_shift(const RocCurve& roc_up, const NormRhombus& rhombus) {
    const std::vector<RocPoint> verts = roc_up.anchored();
    const std::vector<RocPoint> hits =
        rhombus_intersections_range(verts, 0, verts.size() - 1, rhombus);
    if (hits.empty())
        throw std::invalid_argument("cut_shift: no intersection (boundary_cut is false)");
    CutResult res;
    res.left = hits.front();
    res.right = hits.back();
    res.count = static_cast<int>(hits.size());
    return res;
}

bool hypograph_test(const RocPoint& p, const RocCurve& curve) {
    return p.tpr <= interpolate(curve, std::clamp(p.fpr, 0.0, 1.0)) + predicate_tol();
}

double triangle_area_heron(const RocPoint& a, const RocPoint& b, const RocPoint& c) {
    const auto dist = [](const RocPoint& p, const RocPoint& q) {
        return std::hypot(p.fpr - q.fpr, p.tpr - q.tpr);
    };
    double s1 = dist(a, b), s2 = dist(b, c), s3 = dist(c, a);
    // Kahan's stable evaluation of Heron's formula: sort sides descending.
    if (s1 < s2) std::swap(s1, s2);
    if (s1 < s3) std::swap(s1, s3);
    if (s2 < s3) std::swap(s2, s3);
    const double rad = (s1 + (s2 + s3)) * (s3 - (s1 - s2)) * (s3 + (s1 - s2)) * (s1 + (s2 - s3));
    if (rad <= 0.0) return 0.0;
    return 0.25 * std::sqrt(rad);
}

double quad_area(const RocPoint& a, const RocPoint& b, const RocPoint& c, const RocPoint& d) {
    return triangle_area_heron(a, b, c) + triangle_area_heron(a, c, d);
}

} // namespace froc
