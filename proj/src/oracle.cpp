#include "froc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "froc/geometry.hpp"
#include "froc/tolerance.hpp"
#include "froc/transport.hpp"

namespace froc {

namespace {

double trap(const RocPoint& a, const RocPoint& b) {
    return (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
}

void push_if_feasible(std::vector<RocPoint>& out, const RocPoint& p, const RocPoint& center,
                      double eps, const std::vector<RocPoint>& up_verts) {
    if (p.fpr < 0.0 || p.fpr > 1.0 || p.tpr < 0.0 || p.tpr > 1.0) return;
    if (l1_distance(p, center) > eps + 1e-12) return;
    if (p.tpr > interpolate_sorted(up_verts, p.fpr) + predicate_tol()) return;  // not achievable
    out.push_back(p);
}

std::vector<RocPoint> candidates_for(const RocPoint& center, const RocPoint& q_up,
                                     const std::vector<RocPoint>& up_verts, double eps,
                                     double delta, bool boundary_only) {
    std::vector<RocPoint> cand;
    const NormRhombus rh = norm_rhombus(center, eps);

    const RocPoint corners[4] = {rh.u, rh.r, rh.d, rh.l};
    for (const RocPoint& c : corners) push_if_feasible(cand, c, center, eps, up_verts);
    // Clamped U and L are candidates even when the raw vertices fall
    // outside the square (the transport may select them).
    push_if_feasible(cand, clamp01(rh.u), center, eps, up_verts);
    push_if_feasible(cand, clamp01(rh.l), center, eps, up_verts);

    const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * eps / delta)));
    for (int e = 0; e < 4; ++e) {
        const RocPoint& a = corners[e];
        const RocPoint& b = corners[(e + 1) % 4];
        for (int s = 1; s < steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            push_if_feasible(cand, {a.fpr + t * (b.fpr - a.fpr), a.tpr + t * (b.tpr - a.tpr)},
                             center, eps, up_verts);
        }
    }

    const std::vector<RocPoint> hits =
        rhombus_intersections_range(up_verts, 0, up_verts.size() - 1, rh);
    for (const RocPoint& h : hits) push_if_feasible(cand, h, center, eps, up_verts);

    if (l1_distance(q_up, center) <= eps + 1e-12)
        push_if_feasible(cand, q_up, center, eps, up_verts);

    if (!boundary_only) {
        // Interior lattice of the L1 ball at spacing delta.
        for (double dx = -eps; dx <= eps + 1e-15; dx += delta) {
            const double span = eps - std::abs(dx);
            for (double dy = -span; dy <= span + 1e-15; dy += delta) {
                if (std::abs(dx) + std::abs(dy) >= eps - delta * 0.5) continue;
                push_if_feasible(cand, {center.fpr + dx, center.tpr + dy}, center, eps, up_verts);
            }
        }
    }

    std::sort(cand.begin(), cand.end(), [](const RocPoint& p, const RocPoint& q) {
        return p.fpr < q.fpr || (p.fpr == q.fpr && p.tpr < q.tpr);
    });
    cand.erase(std::unique(cand.begin(), cand.end(),
                           [](const RocPoint& p, const RocPoint& q) { return p == q; }),
               cand.end());
    return cand;
}

} // namespace

std::vector<RocPoint> oracle_candidates(const RocCurve& roc_up, const RocCurve& roc_down,
                                        std::size_t index, double eps, double delta,
                                        bool boundary_only) {
    const std::vector<RocPoint> up_verts = pla(roc_up).anchored();
    return candidates_for(roc_down[index], roc_up[index], up_verts, eps, delta, boundary_only);
}

OracleResult dp_optimal(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                        double delta, bool boundary_only) {
    const std::size_t k = roc_up.size();
    if (k == 0 || k != roc_down.size())
        throw std::invalid_argument("dp_optimal: curves must be nonempty and equal length");
    if (k > 25) throw std::invalid_argument("dp_optimal: k must be <= 25");
    if (!(delta >= 1e-4)) throw std::invalid_argument("dp_optimal: delta must be >= 1e-4");
    if (!(eps > 0.0)) throw std::invalid_argument("dp_optimal: eps must be > 0");

    const std::vector<RocPoint> up_verts = pla(roc_up).anchored();

    std::vector<std::vector<RocPoint>> layers(k);
    for (std::size_t i = 0; i < k; ++i) {
        layers[i] = candidates_for(roc_down[i], roc_up[i], up_verts, eps, delta, boundary_only);
        if (layers[i].empty())
            throw InfeasibleError("dp_optimal: no achievable fair candidate at index " +
                                      std::to_string(i),
                                  i);
    }

    constexpr double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> value(layers[0].size());
    std::vector<std::vector<int>> back(k);
    for (std::size_t c = 0; c < layers[0].size(); ++c)
        value[c] = trap({0.0, 0.0}, layers[0][c]);
    back[0].assign(layers[0].size(), -1);

    for (std::size_t i = 1; i < k; ++i) {
        const std::vector<RocPoint>& prev = layers[i - 1];
        const std::vector<RocPoint>& cur = layers[i];
        std::vector<double> next_value(cur.size(), ninf);
        back[i].assign(cur.size(), -1);
        const std::int64_t m = static_cast<std::int64_t>(cur.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t ci = 0; ci < m; ++ci) {
            const RocPoint c = cur[static_cast<std::size_t>(ci)];
            double best = ninf;
            int best_p = -1;
            for (std::size_t pi = 0; pi < prev.size(); ++pi) {
                if (prev[pi].fpr > c.fpr) break;  // layers are fpr-sorted
                if (value[pi] == ninf) continue;
                const double v = value[pi] + trap(prev[pi], c);
                if (v > best) {
                    best = v;
                    best_p = static_cast<int>(pi);
                }
            }
            next_value[static_cast<std::size_t>(ci)] = best;
            back[i][static_cast<std::size_t>(ci)] = best_p;
        }
        value.swap(next_value);
    }

    double best = ninf;
    int best_c = -1;
    for (std::size_t c = 0; c < layers[k - 1].size(); ++c) {
        if (value[c] == ninf) continue;
        const double v = value[c] + trap(layers[k - 1][c], {1.0, 1.0});
        if (v > best) {
            best = v;
            best_c = static_cast<int>(c);
        }
    }
    if (best_c < 0)
        throw InfeasibleError("dp_optimal: no fpr-monotone chain through the candidate sets",
                              k - 1);

    OracleResult res;
    res.best_auc = best;
    res.best_points.resize(k);
    int cur = best_c;
    for (std::size_t i = k; i-- > 0;) {
        res.best_points[i] = layers[i][static_cast<std::size_t>(cur)];
        cur = back[i][static_cast<std::size_t>(cur)];
    }
    return res;
}

bool assumption_spacing_holds(const RocCurve& roc_up, const RocCurve& roc_down) {
    const std::size_t k = roc_up.size();
    for (std::size_t i = 0; i < k; ++i) {
        const double prev_down = i == 0 ? 0.0 : roc_down[i - 1].fpr;
        const double next_down = i + 1 == k ? 1.0 : roc_down[i + 1].fpr;
        if (roc_up[i].fpr < prev_down - predicate_tol() ||
            roc_up[i].fpr > next_down + predicate_tol())
            return false;
    }
    return true;
}

bool assumption_cut_count_holds(const RocCurve& roc_up, const RocCurve& roc_down, double eps) {
    const std::vector<RocPoint> up_verts = pla(roc_up).anchored();
    for (std::size_t i = 0; i < roc_down.size(); ++i) {
        const NormRhombus rh = norm_rhombus(roc_down[i], eps);
        const std::vector<RocPoint> hits =
            rhombus_intersections_range(up_verts, 0, up_verts.size() - 1, rh);
        if (hits.size() > 2) return false;
    }
    return true;
}

OptimalityReport optimality_report(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                                   double delta, bool boundary_only) {
    OptimalityReport rep;
    const TransportPlan plan = fair_roc(roc_up, roc_down, eps);
    rep.froc_auc = polyline_area(plan.fair_up.anchored());
    rep.oracle_auc = dp_optimal(roc_up, roc_down, eps, delta, boundary_only).best_auc;
    rep.gap = rep.oracle_auc - rep.froc_auc;
    rep.spacing_holds = assumption_spacing_holds(roc_up, roc_down);
    rep.cut_count_holds = assumption_cut_count_holds(roc_up, roc_down, eps);
    rep.assumption_42_holds = rep.spacing_holds && rep.cut_count_holds;
    return rep;
}

} // namespace froc
