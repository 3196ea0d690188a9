#include "froc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "froc/rng.hpp"
#include "froc/tolerance.hpp"

namespace froc {

std::array<double, 3> convex_mix(const RocPoint& target, const RocPoint& qa, const RocPoint& qb,
                                 const RocPoint& qc) {
    const double a1 = qa.tpr - qc.tpr, a2 = qa.fpr - qc.fpr;
    const double b1 = qb.tpr - qc.tpr, b2 = qb.fpr - qc.fpr;
    const double c1 = target.tpr - qc.tpr, c2 = target.fpr - qc.fpr;

    const double det = a1 * b2 - a2 * b1;
    if (std::abs(det) <= 1e-12)
        throw std::invalid_argument("convex_mix: vertices are collinear");

    double pa = (c1 * b2 - c2 * b1) / det;
    double pb = (a1 * c2 - a2 * c1) / det;
    double pc = 1.0 - pa - pb;

    const char* names[3] = {"p_a", "p_b", "p_c"};
    const double probs_raw[3] = {pa, pb, pc};
    for (int i = 0; i < 3; ++i) {
        if (probs_raw[i] < -assert_tol) {
            std::ostringstream msg;
            msg << "convex_mix: target outside triangle (" << names[i] << " = " << probs_raw[i]
                << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    pa = std::clamp(pa, 0.0, 1.0);
    pb = std::clamp(pb, 0.0, 1.0);
    pc = std::clamp(pc, 0.0, 1.0);
    const double sum = pa + pb + pc;
    return {pa / sum, pb / sum, pc / sum};
}

namespace {

struct PlaVertex {
    RocPoint point;
    int position;  // original curve position; -1 reject anchor, -2 accept anchor
};

// Anchored, deduplicated PLA of the base curve with original positions kept.
std::vector<PlaVertex> anchored_vertices(const RocCurve& base) {
    std::vector<PlaVertex> verts;
    verts.push_back({{0.0, 0.0}, -1});
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] == verts.back().point) continue;
        verts.push_back({base[i], static_cast<int>(i)});
    }
    verts.push_back({{1.0, 1.0}, -2});
    return verts;
}

VertexClassifier vertex_for(const PlaVertex& v, int group, const QueryGrid& grid) {
    if (v.position == -1 && v.point == RocPoint{0.0, 0.0}) return VertexClassifier::reject();
    if (v.position == -2) return VertexClassifier::accept();
    VertexClassifier vc;
    vc.kind = VertexClassifier::Kind::Threshold;
    vc.position = v.position;
    vc.group = group;
    vc.threshold = grid.threshold(grid.k - v.position);
    vc.point = v.point;
    return vc;
}

// Two-vertex mixture for a target on the segment a->b, third slot padded
// with a distinct zero-probability vertex.
Mixture segment_mixture(const RocPoint& target, const PlaVertex& a, const PlaVertex& b, int group,
                        const QueryGrid& grid) {
    const double dx = b.point.fpr - a.point.fpr;
    const double dy = b.point.tpr - a.point.tpr;
    const double t = std::abs(dx) >= std::abs(dy) ? (dx == 0.0 ? 0.0 : (target.fpr - a.point.fpr) / dx)
                                                  : (target.tpr - a.point.tpr) / dy;
    const double tc = std::clamp(t, 0.0, 1.0);

    Mixture m;
    m.target = target;
    m.vertices[0] = vertex_for(a, group, grid);
    m.vertices[1] = vertex_for(b, group, grid);
    m.vertices[2] = (m.vertices[0].kind == VertexClassifier::Kind::AlwaysReject ||
                     m.vertices[1].kind == VertexClassifier::Kind::AlwaysReject)
                        ? VertexClassifier::accept()
                        : VertexClassifier::reject();
    m.probs = {1.0 - tc, tc, 0.0};
    return m;
}

Mixture trivial_mixture(const PlaVertex& v, int group, const QueryGrid& grid) {
    Mixture m;
    m.target = v.point;
    m.vertices[0] = vertex_for(v, group, grid);
    m.vertices[1] = VertexClassifier::reject();
    m.vertices[2] = VertexClassifier::accept();
    m.probs = {1.0, 0.0, 0.0};
    return m;
}

// Distance from the target to segment a->b small enough to treat the
// target as on-segment.
bool on_segment(const RocPoint& target, const RocPoint& a, const RocPoint& b) {
    const double dx = b.fpr - a.fpr, dy = b.tpr - a.tpr;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return l1_distance(target, a) <= assert_tol;
    double t = ((target.fpr - a.fpr) * dx + (target.tpr - a.tpr) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const RocPoint proj{a.fpr + t * dx, a.tpr + t * dy};
    return l1_distance(target, proj) <= assert_tol;
}

Mixture up_mixture(const RocPoint& target, const std::vector<PlaVertex>& verts, int group,
                   const QueryGrid& grid) {
    // On-curve targets (cut points, kept points) live on some PLA segment.
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
        if (target.fpr < std::min(verts[i].point.fpr, verts[i + 1].point.fpr) - assert_tol)
            break;
        if (target.fpr > verts[i + 1].point.fpr + assert_tol) continue;
        if (on_segment(target, verts[i].point, verts[i + 1].point))
            return segment_mixture(target, verts[i], verts[i + 1], group, grid);
    }

    // Interior of the hypograph: first base vertex whose triangle with the
    // two constant classifiers contains the target.
    for (const PlaVertex& v : verts) {
        if (v.position < 0) continue;
        const RocPoint q = v.point;
        try {
            const std::array<double, 3> p = convex_mix(target, {0.0, 0.0}, {1.0, 1.0}, q);
            Mixture m;
            m.target = target;
            m.vertices[0] = VertexClassifier::reject();
            m.vertices[1] = VertexClassifier::accept();
            m.vertices[2] = vertex_for(v, group, grid);
            m.probs = p;
            return m;
        } catch (const std::invalid_argument&) {
            continue;  // degenerate or not containing; try the next vertex
        }
    }

    // A point just under a steep segment can escape every single-vertex
    // triangle; the hull of {(0,0), (1,1), Q_j, Q_j+1} still covers it, so
    // try adjacent vertex pairs with one constant classifier.
    for (std::size_t j = 0; j + 1 < verts.size(); ++j) {
        if (verts[j].position < 0 && verts[j + 1].position < 0) continue;
        for (const VertexClassifier& anchor :
             {VertexClassifier::reject(), VertexClassifier::accept()}) {
            try {
                const std::array<double, 3> p =
                    convex_mix(target, verts[j].point, verts[j + 1].point, anchor.point);
                Mixture m;
                m.target = target;
                m.vertices[0] = vertex_for(verts[j], group, grid);
                m.vertices[1] = vertex_for(verts[j + 1], group, grid);
                m.vertices[2] = anchor;
                m.probs = p;
                return m;
            } catch (const std::invalid_argument&) {
                continue;
            }
        }
    }
    std::ostringstream msg;
    msg << "construct_classifier: no containing triangle for target (" << target.fpr << ", "
        << target.tpr << "); point not realizable from the base curve";
    throw std::invalid_argument(msg.str());
}

} // namespace

RandomizedClassifier construct_classifier(const TransportPlan& plan, const RocCurve& base_up,
                                          const RocCurve& base_down, int up_group,
                                          const QueryGrid& grid, double norm_min,
                                          double norm_max) {
    const std::size_t k = plan.decisions.size();
    if (base_up.size() != k || base_down.size() != k)
        throw std::invalid_argument("construct_classifier: plan and base curves disagree on k");
    if (grid.k != static_cast<int>(k))
        throw std::invalid_argument("construct_classifier: grid k mismatch");
    if (up_group != 0 && up_group != 1)
        throw std::invalid_argument("construct_classifier: up_group must be 0 or 1");

    RandomizedClassifier rc;
    rc.k = grid.k;
    rc.norm_min = norm_min;
    rc.norm_max = norm_max;
    rc.up_group = up_group;

    const int down_group = 1 - up_group;
    auto& down_mixtures = rc.mixtures[static_cast<std::size_t>(down_group)];
    down_mixtures.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        PlaVertex v{base_down[i], static_cast<int>(i)};
        down_mixtures.push_back(trivial_mixture(v, down_group, grid));
    }

    const std::vector<PlaVertex> up_verts = anchored_vertices(base_up);
    auto& up_mixtures = rc.mixtures[static_cast<std::size_t>(up_group)];
    up_mixtures.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const ShiftDecision& d = plan.decisions[i];
        if (d.kind == ShiftKind::NoShift) {
            up_mixtures.push_back(trivial_mixture({base_up[i], static_cast<int>(i)}, up_group, grid));
        } else {
            up_mixtures.push_back(up_mixture(d.target, up_verts, up_group, grid));
        }
    }
    return rc;
}

namespace {

double normalize_score(const RandomizedClassifier& rc, double score) {
    if (rc.norm_max == rc.norm_min) return 0.5;
    const double z = (score - rc.norm_min) / (rc.norm_max - rc.norm_min);
    return std::clamp(z, 0.0, 1.0);
}

int evaluate_vertex(const VertexClassifier& v, double normalized_score) {
    switch (v.kind) {
        case VertexClassifier::Kind::AlwaysReject: return 0;
        case VertexClassifier::Kind::AlwaysAccept: return 1;
        case VertexClassifier::Kind::Threshold:
            return normalized_score >= v.threshold ? 1 : 0;
    }
    return 0;
}

} // namespace

int predict(const RandomizedClassifier& rc, double score, int group, int threshold_index,
            std::uint64_t seed, std::uint64_t sample_id) {
    if (group != 0 && group != 1) throw std::invalid_argument("predict: group must be 0 or 1");
    if (threshold_index < 1 || threshold_index > rc.k)
        throw std::invalid_argument("predict: threshold index out of range");
    const std::size_t position = static_cast<std::size_t>(rc.k - threshold_index);
    const Mixture& m = rc.mixtures[static_cast<std::size_t>(group)][position];

    const std::uint64_t stream =
        sample_id * 2654435761ULL + static_cast<std::uint64_t>(threshold_index) * 40503ULL +
        static_cast<std::uint64_t>(group);
    const double u = uniform_at(seed, stream);

    const double z = normalize_score(rc, score);
    if (u < m.probs[0]) return evaluate_vertex(m.vertices[0], z);
    if (u < m.probs[0] + m.probs[1]) return evaluate_vertex(m.vertices[1], z);
    return evaluate_vertex(m.vertices[2], z);
}

RocCurve simulate_curve(const RandomizedClassifier& rc, const GroupedScores& data, int group,
                        std::uint64_t seed) {
    std::vector<std::size_t> rows;
    rows.reserve(data.rows.size());
    std::size_t pos_n = 0, neg_n = 0;
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        if (data.rows[r].group != group) continue;
        rows.push_back(r);
        (data.rows[r].label == 1 ? pos_n : neg_n) += 1;
    }
    if (pos_n == 0 || neg_n == 0)
        throw DataError("simulate_curve: group lacks positives or negatives");

    RocCurve curve;
    curve.points.resize(static_cast<std::size_t>(rc.k));
#pragma omp parallel for schedule(static)
    for (int position = 0; position < rc.k; ++position) {
        const int index = rc.k - position;
        std::int64_t tp = 0, fp = 0;
        for (const std::size_t r : rows) {
            const ScoreRow& row = data.rows[r];
            // Rows hold normalized scores; predict expects the raw scale.
            const double raw = data.norm_min + row.score * (data.norm_max - data.norm_min);
            const int yhat = predict(rc, raw, group, index, seed, r);
            (row.label == 1 ? tp : fp) += yhat;
        }
        curve.points[static_cast<std::size_t>(position)] = {
            static_cast<double>(fp) / static_cast<double>(neg_n),
            static_cast<double>(tp) / static_cast<double>(pos_n)};
    }
    return curve;
}

} // namespace froc
