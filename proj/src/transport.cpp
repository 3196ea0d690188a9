#include "froc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "froc/tolerance.hpp"

namespace froc {

const char* to_string(ShiftKind kind) {
    switch (kind) {
        case ShiftKind::CutShiftLeft: return "cut_shift_left";
        case ShiftKind::CutShiftRight: return "cut_shift_right";
        case ShiftKind::UpShift: return "up_shift";
        case ShiftKind::LeftShift: return "left_shift";
        case ShiftKind::NoShift: return "no_shift";
    }
    return "no_shift";
}

ShiftKind shift_kind_from_string(const std::string& s) {
    if (s == "cut_shift_left") return ShiftKind::CutShiftLeft;
    if (s == "cut_shift_right") return ShiftKind::CutShiftRight;
    if (s == "up_shift") return ShiftKind::UpShift;
    if (s == "left_shift") return ShiftKind::LeftShift;
    if (s == "no_shift") return ShiftKind::NoShift;
    throw std::invalid_argument("unknown shift kind: " + s);
}

namespace {

struct IndexOutcome {
    ShiftDecision decision;
    std::string diagnostic;  // empty when clean
};

// Norm-boundary intersection queries against the up PLA in rotated
// coordinates u = fpr + tpr, v = fpr - tpr: the L1 ball becomes the box
// |u - u_c| <= eps, |v - v_c| <= eps, and u is nondecreasing along any
// monotone curve. The u window is then one contiguous segment range found
// by binary search, and inside it only segments whose v range straddles a
// box edge v_c +- eps can touch the boundary; a segment tree over v finds
// those without walking the in-ball arc. This keeps each query at
// O(log k + hits), which the linear-time scaling of the transport needs
// once eps spans many knots.
class CutIndex {
public:
    explicit CutIndex(const std::vector<RocPoint>& verts) : verts_(&verts) {
        nseg_ = verts.size() - 1;
        u_.resize(verts.size());
        for (std::size_t j = 0; j < verts.size(); ++j) u_[j] = verts[j].fpr + verts[j].tpr;
        size_ = 1;
        while (size_ < nseg_) size_ *= 2;
        constexpr double inf = std::numeric_limits<double>::infinity();
        vmin_.assign(2 * size_, inf);
        vmax_.assign(2 * size_, -inf);
        for (std::size_t j = 0; j < nseg_; ++j) {
            const double va = verts[j].fpr - verts[j].tpr;
            const double vb = verts[j + 1].fpr - verts[j + 1].tpr;
            vmin_[size_ + j] = std::min(va, vb);
            vmax_[size_ + j] = std::max(va, vb);
        }
        for (std::size_t n = size_ - 1; n > 0; --n) {
            vmin_[n] = std::min(vmin_[2 * n], vmin_[2 * n + 1]);
            vmax_[n] = std::max(vmax_[2 * n], vmax_[2 * n + 1]);
        }
    }

    std::vector<RocPoint> intersections(const NormRhombus& rh) const {
        const double tol = predicate_tol();
        const double slack = 2.0 * tol;
        const double uc = rh.center.fpr + rh.center.tpr;
        const double vc = rh.center.fpr - rh.center.tpr;

        // Segments overlapping the u window [uc - eps, uc + eps].
        const auto lo_it = std::lower_bound(u_.begin() + 1, u_.end(), uc - rh.eps - slack);
        std::size_t s_lo = static_cast<std::size_t>(lo_it - u_.begin()) - 1;
        const auto hi_it = std::upper_bound(u_.begin(), u_.end(), uc + rh.eps + slack);
        std::size_t s_hi = std::min(static_cast<std::size_t>(hi_it - u_.begin()), nseg_);
        if (s_lo >= s_hi) return {};

        // Candidates: the window-end segments (u-edge crossings) plus every
        // segment whose v range straddles a v edge of the box.
        std::vector<std::size_t> segs;
        segs.push_back(s_lo);
        if (s_hi - 1 != s_lo) segs.push_back(s_hi - 1);
        collect(segs, 1, 0, size_, s_lo, s_hi, vc - rh.eps, vc + rh.eps, slack);
        std::sort(segs.begin(), segs.end());
        segs.erase(std::unique(segs.begin(), segs.end()), segs.end());

        std::vector<RocPoint> hits;
        for (const std::size_t j : segs) {
            Segment s{(*verts_)[j], (*verts_)[j + 1]};
            if (s.a == s.b) continue;
            for (const RocPoint& p : segment_rhombus_intersections(s, rh)) hits.push_back(p);
        }
        std::sort(hits.begin(), hits.end(), [](const RocPoint& p, const RocPoint& q) {
            return p.fpr < q.fpr || (p.fpr == q.fpr && p.tpr < q.tpr);
        });
        std::vector<RocPoint> uniq;
        for (const RocPoint& p : hits)
            if (uniq.empty() || l1_distance(uniq.back(), p) > 2.0 * tol) uniq.push_back(p);
        return uniq;
    }

private:
    void collect(std::vector<std::size_t>& out, std::size_t node, std::size_t node_lo,
                 std::size_t node_hi, std::size_t q_lo, std::size_t q_hi, double v_lo_edge,
                 double v_hi_edge, double slack) const {
        if (node_hi <= q_lo || q_hi <= node_lo) return;
        const bool lo_straddle =
            vmin_[node] <= v_lo_edge + slack && vmax_[node] >= v_lo_edge - slack;
        const bool hi_straddle =
            vmin_[node] <= v_hi_edge + slack && vmax_[node] >= v_hi_edge - slack;
        if (!lo_straddle && !hi_straddle) return;
        if (node_hi - node_lo == 1) {
            out.push_back(node_lo);
            return;
        }
        const std::size_t mid = node_lo + (node_hi - node_lo) / 2;
        collect(out, 2 * node, node_lo, mid, q_lo, q_hi, v_lo_edge, v_hi_edge, slack);
        collect(out, 2 * node + 1, mid, node_hi, q_lo, q_hi, v_lo_edge, v_hi_edge, slack);
    }

    const std::vector<RocPoint>* verts_;
    std::size_t nseg_ = 0;
    std::size_t size_ = 1;
    std::vector<double> u_;
    std::vector<double> vmin_, vmax_;
};

struct TransportCtx {
    const std::vector<RocPoint>& up;
    const std::vector<RocPoint>& down;
    std::vector<RocPoint> up_verts;    // anchored, deduplicated PLA of roc_up
    std::vector<RocPoint> down_verts;  // anchored, deduplicated PLA of roc_down
    double eps = 0.0;
    std::unique_ptr<CutIndex> cut_index;
};

IndexOutcome decide_index(const TransportCtx& ctx, std::size_t i) {
    IndexOutcome out;
    const RocPoint q_up = ctx.up[i];
    const RocPoint q_down = ctx.down[i];
    const double tol = predicate_tol();

    // Already within the norm set: nothing to transport.
    if (l1_distance(q_up, q_down) <= ctx.eps + tol) {
        out.decision = {ShiftKind::NoShift, q_up, q_up};
        return out;
    }

    const NormRhombus rh = norm_rhombus(q_down, ctx.eps);
    const std::vector<RocPoint> hits = ctx.cut_index->intersections(rh);
    if (!hits.empty()) {
        const RocPoint p_left = hits.front();
        const RocPoint p_right = hits.back();
        if (q_up.fpr >= q_down.fpr) {
            out.decision = {ShiftKind::CutShiftRight, p_right, p_right};
        } else {
            out.decision = {ShiftKind::CutShiftLeft, p_left, p_left};
        }
        if (hits.size() > 2) {
            std::ostringstream msg;
            msg << "index " << i << ": norm boundary intersected " << hits.size()
                << " times (at most 2 assumed); extreme pair used";
            out.diagnostic = msg.str();
        }
        return out;
    }

    if (q_up.tpr <= interpolate_sorted(ctx.down_verts, q_up.fpr) + tol) {
        out.decision = {ShiftKind::NoShift, q_up, q_up};
        std::ostringstream msg;
        msg << "index " << i << ": kept in hypograph of ROC_down with L1 gap "
            << l1_distance(q_up, q_down) << " > eps";
        out.diagnostic = msg.str();
        return out;
    }

    const RocPoint prev = i == 0 ? RocPoint{0.0, 0.0} : ctx.up[i - 1];
    const RocPoint next = i + 1 == ctx.up.size() ? RocPoint{1.0, 1.0} : ctx.up[i + 1];
    // Quadrilateral loss of replacing q_up by a vertex, split at the
    // prev-next chord. The candidate triangle is signed: a vertex above
    // the chord reduces the loss rather than adding to it, which matters
    // in the anchor windows (first and last index) where U regularly sits
    // above the chord and an unsigned comparison would misorder U and L.
    const auto loss_with = [&](const RocPoint& v) {
        const double base = triangle_area_heron(next, q_up, prev);
        const double signed_tri =
            0.5 * ((prev.fpr - next.fpr) * (v.tpr - next.tpr) -
                   (prev.tpr - next.tpr) * (v.fpr - next.fpr));
        return base + signed_tri;
    };
    const double area_l = loss_with(rh.l);
    const double area_u = loss_with(rh.u);
    const RocPoint raw = area_l >= area_u ? rh.u : rh.l;
    const RocPoint clamped = clamp01(raw);
    out.decision = {area_l >= area_u ? ShiftKind::UpShift : ShiftKind::LeftShift, clamped, raw};
    if (!(clamped == raw)) {
        std::ostringstream msg;
        msg << "index " << i << ": raw vertex (" << raw.fpr << ", " << raw.tpr
            << ") clamped to the unit square";
        out.diagnostic = msg.str();
    }
    return out;
}

TransportCtx make_ctx(const RocCurve& roc_up, const RocCurve& roc_down, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("fair_roc: eps must be > 0");
    if (roc_up.size() != roc_down.size())
        throw std::invalid_argument("fair_roc: curves must have equal length");
    if (roc_up.empty()) throw std::invalid_argument("fair_roc: curves must be nonempty");
    TransportCtx ctx{roc_up.points, roc_down.points, pla(roc_up).anchored(),
                     pla(roc_down).anchored(), eps, nullptr};
    ctx.cut_index = std::make_unique<CutIndex>(ctx.up_verts);
    return ctx;
}

void finalize_plan(TransportPlan& plan, const RocCurve& roc_up, const RocCurve& roc_down,
                   std::vector<IndexOutcome>& outcomes, const TransportOptions& opts) {
    plan.fair_down = roc_down;
    plan.fair_up.points.reserve(outcomes.size());
    plan.decisions.reserve(outcomes.size());
    for (IndexOutcome& o : outcomes) {
        plan.decisions.push_back(o.decision);
        plan.fair_up.points.push_back(o.decision.target);
        if (!o.diagnostic.empty()) plan.diagnostics.push_back(std::move(o.diagnostic));
    }

    const DominanceResult dom = dominance(roc_up, roc_down);
    if (dom.kind == DominanceResult::Kind::Intersecting) {
        std::ostringstream msg;
        msg << "input curves intersect (" << dom.crossing_fprs.size() << " sign changes)";
        if (dom.crossings_corner_confined)
            msg << "; crossings confined to fpr <= 0.2 or tpr >= 0.5";
        plan.diagnostics.push_back(msg.str());
    } else if (dom.kind == DominanceResult::Kind::Curve1Up) {
        plan.diagnostics.push_back("roc_down dominates roc_up; inputs likely swapped");
    }

    if (!plan.fair_up.is_monotone()) {
        plan.diagnostics.push_back("fair_up lost monotonicity" +
                                   std::string(opts.repair_monotone ? "; isotonic repair applied"
                                                                    : " (no repair requested)"));
        if (opts.repair_monotone) {
            // Lowering pass from the right keeps every point achievable
            // (never raised above ROC_up).
            for (std::size_t i = plan.fair_up.points.size() - 1; i-- > 0;) {
                plan.fair_up.points[i].tpr =
                    std::min(plan.fair_up.points[i].tpr, plan.fair_up.points[i + 1].tpr);
            }
        }
    }
}

} // namespace

TransportPlan fair_roc_serial(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                              const TransportOptions& opts) {
    TransportCtx ctx = make_ctx(roc_up, roc_down, eps);
    const std::size_t n = ctx.up.size();

    std::vector<IndexOutcome> outcomes(n);
    for (std::size_t i = 0; i < n; ++i) outcomes[i] = decide_index(ctx, i);

    TransportPlan plan;
    plan.eps = eps;
    finalize_plan(plan, roc_up, roc_down, outcomes, opts);
    return plan;
}

TransportPlan fair_roc(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                       const TransportOptions& opts) {
    TransportCtx ctx = make_ctx(roc_up, roc_down, eps);
    const std::int64_t n = static_cast<std::int64_t>(ctx.up.size());

    std::vector<IndexOutcome> outcomes(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        outcomes[idx] = decide_index(ctx, idx);
    }

    TransportPlan plan;
    plan.eps = eps;
    finalize_plan(plan, roc_up, roc_down, outcomes, opts);
    return plan;
}

FairnessReport verify_fairness(const RocCurve& fair_up, const RocCurve& fair_down, double eps) {
    if (fair_up.size() != fair_down.size())
        throw std::invalid_argument("verify_fairness: curves must have equal length");

    FairnessReport rep;
    for (std::size_t i = 0; i < fair_up.size(); ++i)
        rep.max_index_gap = std::max(rep.max_index_gap, l1_distance(fair_up[i], fair_down[i]));

    // Dense TPR gap; transport output may be non-monotone, so interpolate
    // over an fpr-sorted view.
    RocCurve up_sorted = fair_up;
    std::stable_sort(up_sorted.points.begin(), up_sorted.points.end(),
                     [](const RocPoint& a, const RocPoint& b) { return a.fpr < b.fpr; });
    const std::vector<RocPoint> up_pts = up_sorted.anchored();
    const std::vector<RocPoint> down_pts = fair_down.anchored();
    constexpr int grid = 1001;
    for (int g = 0; g < grid; ++g) {
        const double x = static_cast<double>(g) / (grid - 1);
        rep.max_dense_gap =
            std::max(rep.max_dense_gap,
                     std::abs(interpolate_sorted(up_pts, x) - interpolate_sorted(down_pts, x)));
    }
    rep.pass = rep.max_index_gap <= eps + assert_tol;
    return rep;
}

double auc_loss(const TransportPlan& plan, const RocCurve& original_up) {
    return auc(original_up) - polyline_area(plan.fair_up.anchored());
}

} // namespace froc
