#ifndef FROC_TRANSPORT_HPP
#define FROC_TRANSPORT_HPP

#include <string>
#include <vector>

#include "froc/geometry.hpp"
#include "froc/roc.hpp"

namespace froc {

enum class ShiftKind { CutShiftLeft, CutShiftRight, UpShift, LeftShift, NoShift };

const char* to_string(ShiftKind kind);
ShiftKind shift_kind_from_string(const std::string& s);

struct ShiftDecision {
    ShiftKind kind = ShiftKind::NoShift;
    RocPoint target;      // fair point, clamped to the unit square
    RocPoint target_raw;  // pre-clamp target (rhombus vertices may fall outside)
};

struct TransportPlan {
    double eps = 0.0;
    std::vector<ShiftDecision> decisions;  // one per query index, curve order
    RocCurve fair_up;
    RocCurve fair_down;  // the input down curve, point for point
    std::vector<std::string> diagnostics;
};

struct TransportOptions {
    // Opt-in isotonic repair of fair_up's tpr sequence (lowering pass from
    // the right). Default off: reported AUC reflects the shifts as made.
    bool repair_monotone = false;
};

// Per-index transport of roc_up toward roc_down so that every index pair
// ends within eps in L1. Decisions depend only on the original inputs, so
// the OpenMP version partitions indices across threads and is bit-identical
// to fair_roc_serial, which is kept as the reference implementation.
TransportPlan fair_roc(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                       const TransportOptions& opts = {});
TransportPlan fair_roc_serial(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                              const TransportOptions& opts = {});

struct FairnessReport {
    double max_index_gap = 0.0;  // max L1 gap over matched indices
    double max_dense_gap = 0.0;  // max |TPR gap| over a dense fpr grid
    bool pass = false;           // max_index_gap <= eps + assert_tol
};

FairnessReport verify_fairness(const RocCurve& fair_up, const RocCurve& fair_down, double eps);

// AUC forfeited by the transport: auc(original_up) minus the signed
// trapezoid area of the fair up curve.
double auc_loss(const TransportPlan& plan, const RocCurve& original_up);

} // namespace froc

#endif
