#ifndef FROC_ROC_HPP
#define FROC_ROC_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace froc {

// A point in ROC space.
struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;

    friend bool operator==(const RocPoint& a, const RocPoint& b) {
        return a.fpr == b.fpr && a.tpr == b.tpr;
    }
};

// An empirical ROC curve: the query outputs ordered by nondecreasing FPR
// (equivalently by decreasing threshold). The anchors (0,0) and (1,1) are
// implicit; anchored() materializes them for geometry and area code.
// Consecutive duplicate points are allowed (flat regions); pla() removes
// them.
struct RocCurve {
    std::vector<RocPoint> points;

    RocCurve() = default;
    explicit RocCurve(std::vector<RocPoint> pts) : points(std::move(pts)) {}

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const RocPoint& operator[](std::size_t i) const { return points[i]; }

    std::vector<RocPoint> anchored() const {
        std::vector<RocPoint> out;
        out.reserve(points.size() + 2);
        out.push_back({0.0, 0.0});
        out.insert(out.end(), points.begin(), points.end());
        out.push_back({1.0, 1.0});
        return out;
    }

    // Indices (0-based) where monotonicity fails; empty means valid.
    std::vector<std::size_t> monotonicity_violations() const;
    bool is_monotone() const { return monotonicity_violations().empty(); }
};

// Equidistant thresholds t_i = i/k, i = 1..k.
struct QueryGrid {
    int k = 1;

    explicit QueryGrid(int k_) : k(k_) {
        if (k < 1) throw std::invalid_argument("QueryGrid: k must be >= 1");
    }

    double threshold(int i) const { return static_cast<double>(i) / k; }

    std::vector<double> thresholds() const {
        std::vector<double> t(static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i) t[static_cast<std::size_t>(i - 1)] = threshold(i);
        return t;
    }
};

// Upper bounds on |d TPR/dt| and |d FPR/dt| over thresholds.
struct SlopeBounds {
    double u_t = 0.0;
    double u_f = 0.0;
};

struct ScoreRow {
    double score = 0.0;
    int group = 0;
    int label = 0;
};

// Scores with binary group and label. Scores are expected in [0, 1]
// (load_scores normalizes on ingestion and records the affine map here).
struct GroupedScores {
    std::vector<ScoreRow> rows;
    double norm_min = 0.0;
    double norm_max = 1.0;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Group-conditional empirical ROC at the grid thresholds; point for t_i has
// tpr = P(score >= t_i | y=1, group) and fpr likewise over negatives.
// Output is in curve order (highest threshold first). Throws DataError when
// the group is absent or lacks a label class.
RocCurve empirical_roc(const GroupedScores& data, int group, const QueryGrid& grid);

// Canonical piecewise-linear form: consecutive duplicates removed,
// monotonicity enforced (throws std::invalid_argument listing offending
// indices).
RocCurve pla(const RocCurve& curve);

// TPR of the anchored PLA at `fpr`; vertical segments resolve to the
// maximum TPR at that abscissa. `fpr` must lie in [0, 1].
double interpolate(const RocCurve& curve, double fpr);

// Same on a prebuilt fpr-sorted vertex sequence (binary search); callers
// that query many abscissae build the anchored vector once.
double interpolate_sorted(const std::vector<RocPoint>& pts, double fpr);

// Trapezoid-rule area under the anchored PLA.
double auc(const RocCurve& curve);

// Signed trapezoid sum over an explicit vertex sequence (no anchors
// added). Equals auc() for anchored monotone sequences; also applicable to
// transport outputs that may have lost FPR-monotonicity.
double polyline_area(const std::vector<RocPoint>& pts);

// Worst-case AUC loss of the k-threshold PLA: u_t * u_f / (2k).
double pla_loss_bound(const SlopeBounds& bounds, int k);

// Max finite-difference slopes of the curve over the grid; estimates only.
SlopeBounds estimate_slope_bounds(const RocCurve& curve, const QueryGrid& grid);

struct DominanceResult {
    enum class Kind { Curve0Up, Curve1Up, Intersecting };
    Kind kind = Kind::Curve0Up;
    // For Intersecting: fprs where the sign of (tpr1 - tpr0) flips.
    std::vector<double> crossing_fprs;
    // True when every crossing falls in the fpr <= 0.2 or tpr >= 0.5
    // regions; callers may downgrade to a warning there.
    bool crossings_corner_confined = false;
};

// Samples both PLAs on a uniform fpr grid and reports which curve is
// pointwise above (predicate_tol slack). Ties everywhere report Curve0Up.
DominanceResult dominance(const RocCurve& curve0, const RocCurve& curve1,
                          int grid_resolution = 1001);

} // namespace froc

#endif
