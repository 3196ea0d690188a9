#ifndef FROC_METRICS_HPP
#define FROC_METRICS_HPP

#include <cstdint>
#include <vector>

#include "froc/roc.hpp"

namespace froc {

// Operating statistics of one group at one threshold.
struct ThresholdStats {
    double fpr = 0.0;
    double tpr = 0.0;
    double fnr = 1.0;  // kept equal to 1 - tpr
    double positive_rate = 0.0;
    double accuracy = 0.0;

    static ThresholdStats from_rates(double fpr, double tpr, double positive_rate = 0.0,
                                     double accuracy = 0.0) {
        return {fpr, tpr, 1.0 - tpr, positive_rate, accuracy};
    }
};

// Equalized-odds gap |dFPR| + |dTPR| at a matched threshold.
double eo_gap(const ThresholdStats& a, const ThresholdStats& b);

// The same gap via the |dFPR| + |dFNR| form on the stored fnr fields.
// Identical to eo_gap since |(1-x) - (1-y)| = |x - y|.
double eo_gap_fnr(const ThresholdStats& a, const ThresholdStats& b);

// min/max ratio of positive-prediction rates across the two groups; 1 when
// both rates are 0. Throws DataError when a group has no samples.
double disparate_impact(const std::vector<int>& predictions, const std::vector<int>& groups);

// Fraction of matching entries; throws on empty or mismatched input.
double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels);

// Group stats of thresholding `score >= t` on the given data.
ThresholdStats threshold_stats(const GroupedScores& data, int group, double t);

struct LossDecomposition {
    double l_pla = 0.0;
    double l_auc = 0.0;
    double total = 0.0;
};

LossDecomposition loss_decomposition(const RocCurve& reference_fine, const RocCurve& pla_curve,
                                     const RocCurve& fair_curve);

} // namespace froc

#endif
