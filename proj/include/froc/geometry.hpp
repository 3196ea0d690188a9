#ifndef FROC_GEOMETRY_HPP
#define FROC_GEOMETRY_HPP

#include <optional>
#include <vector>

#include "froc/roc.hpp"

namespace froc {

inline double l1_distance(const RocPoint& p, const RocPoint& q) {
    return std::abs(p.fpr - q.fpr) + std::abs(p.tpr - q.tpr);
}

inline RocPoint clamp01(const RocPoint& p) {
    const auto c = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
    return {c(p.fpr), c(p.tpr)};
}

struct Segment {
    RocPoint a, b;
};

// The L1 ball boundary of radius eps around a down-curve query point.
// Vertices are kept raw (possibly outside the unit square); clamping is the
// caller's business, applied only when a vertex becomes a fair point.
struct NormRhombus {
    RocPoint center;
    double eps = 0.0;
    RocPoint u, r, d, l;  // raw vertices, clockwise from the top
};

NormRhombus norm_rhombus(const RocPoint& center, double eps);

// True iff any segment of the anchored PLA of roc_up meets the rhombus
// boundary; tangency counts.
bool boundary_cut(const RocCurve& roc_up, const NormRhombus& rhombus);

struct CutResult {
    RocPoint left;    // minimum-fpr intersection
    RocPoint right;   // maximum-fpr intersection
    int count = 0;    // distinct intersection points found
};

// All intersections of the anchored PLA of roc_up with the rhombus
// boundary, reduced to the extreme-fpr pair. Tangency yields left == right.
// Throws std::invalid_argument when there is no intersection (caller must
// establish boundary_cut first). count > 2 signals an Assumption-violating
// index; the extreme pair is still returned.
CutResult cut_shift(const RocCurve& roc_up, const NormRhombus& rhombus);

// p.tpr <= PLA(curve)(p.fpr) within predicate_tol.
bool hypograph_test(const RocPoint& p, const RocCurve& curve);

// Heron's formula; collinear inputs give 0, negative radicands from
// rounding are clamped.
double triangle_area_heron(const RocPoint& a, const RocPoint& b, const RocPoint& c);

// Area of the quadrilateral a-b-c-d in traversal order, split into
// triangles a-b-c and a-c-d.
double quad_area(const RocPoint& a, const RocPoint& b, const RocPoint& c, const RocPoint& d);

// Intersections of segment s with the rhombus boundary (0, 1 or 2 points;
// a collinear overlap contributes its two endpoints).
std::vector<RocPoint> segment_rhombus_intersections(const Segment& s, const NormRhombus& rhombus);

// Same, over the polyline segments verts[lo..hi) -> verts[lo+1..hi]; lets
// the transport restrict the search to the fpr window of one rhombus.
std::vector<RocPoint> rhombus_intersections_range(const std::vector<RocPoint>& verts,
                                                  std::size_t lo, std::size_t hi,
                                                  const NormRhombus& rhombus);

} // namespace froc

#endif
