#include "froc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace froc {

double eo_gap(const ThresholdStats& a, const ThresholdStats& b) {
    return std::abs(a.fpr - b.fpr) + std::abs(a.tpr - b.tpr);
}

double eo_gap_fnr(const ThresholdStats& a, const ThresholdStats& b) {
    return std::abs(a.fpr - b.fpr) + std::abs(a.fnr - b.fnr);
}

double disparate_impact(const std::vector<int>& predictions, const std::vector<int>& groups) {
    if (predictions.size() != groups.size())
        throw std::invalid_argument("disparate_impact: length mismatch");
    std::size_t n[2] = {0, 0};
    std::size_t pos[2] = {0, 0};
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int g = groups[i];
        if (g != 0 && g != 1) throw DataError("disparate_impact: group must be 0 or 1");
        ++n[g];
        if (predictions[i] == 1) ++pos[g];
    }
    if (n[0] == 0 || n[1] == 0)
        throw DataError("disparate_impact: a group has no samples");
    const double r0 = static_cast<double>(pos[0]) / static_cast<double>(n[0]);
    const double r1 = static_cast<double>(pos[1]) / static_cast<double>(n[1]);
    if (r0 == 0.0 && r1 == 0.0) return 1.0;
    return std::min(r0, r1) / std::max(r0, r1);
}

double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.empty()) throw std::invalid_argument("accuracy: empty input");
    if (predictions.size() != labels.size())
        throw std::invalid_argument("accuracy: length mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i] == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

ThresholdStats threshold_stats(const GroupedScores& data, int group, double t) {
    std::size_t pos = 0, neg = 0, tp = 0, fp = 0, accepted = 0, total = 0;
    for (const ScoreRow& r : data.rows) {
        if (r.group != group) continue;
        ++total;
        const bool hit = r.score >= t;
        if (hit) ++accepted;
        if (r.label == 1) {
            ++pos;
            if (hit) ++tp;
        } else {
            ++neg;
            if (hit) ++fp;
        }
    }
    if (pos == 0 || neg == 0)
        throw DataError("threshold_stats: group " + std::to_string(group) +
                        " lacks positives or negatives");
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    const double rate = static_cast<double>(accepted) / static_cast<double>(total);
    const double acc =
        static_cast<double>(tp + (neg - fp)) / static_cast<double>(total);
    return ThresholdStats::from_rates(fpr, tpr, rate, acc);
}

LossDecomposition loss_decomposition(const RocCurve& reference_fine, const RocCurve& pla_curve,
                                     const RocCurve& fair_curve) {
    LossDecomposition d;
    d.l_pla = auc(reference_fine) - auc(pla_curve);
    d.l_auc = auc(pla_curve) - polyline_area(fair_curve.anchored());
    d.total = d.l_pla + d.l_auc;
    return d;
}

} // namespace froc
