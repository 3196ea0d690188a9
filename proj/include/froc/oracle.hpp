#ifndef FROC_ORACLE_HPP
#define FROC_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "froc/roc.hpp"

namespace froc {

class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index(index) {}
    std::size_t index;
};

struct OracleResult {
    double best_auc = 0.0;
    std::vector<RocPoint> best_points;
};

// Exhaustive fair-transport optimum on small instances: per index, the
// candidate fair points are the norm boundary discretized at step delta
// (plus cut points, the clamped U/L vertices, and the original up point
// when already fair; interior lattice points too unless boundary_only),
// restricted to achievable points in the hypograph of roc_up. Dynamic
// programming maximizes the trapezoid area of the anchored chain subject
// to fpr monotonicity. Guards: k <= 25, delta >= 1e-4.
OracleResult dp_optimal(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                        double delta, bool boundary_only = true);

// Candidate fair points for one index, as used by dp_optimal.
std::vector<RocPoint> oracle_candidates(const RocCurve& roc_up, const RocCurve& roc_down,
                                        std::size_t index, double eps, double delta,
                                        bool boundary_only);

struct OptimalityReport {
    double froc_auc = 0.0;
    double oracle_auc = 0.0;
    double gap = 0.0;  // oracle_auc - froc_auc
    bool assumption_42_holds = false;
    bool spacing_holds = false;
    bool cut_count_holds = false;  // every norm boundary met at most twice
};

OptimalityReport optimality_report(const RocCurve& roc_up, const RocCurve& roc_down, double eps,
                                   double delta, bool boundary_only = true);

// The two Assumption conditions, checkable on their own.
bool assumption_spacing_holds(const RocCurve& roc_up, const RocCurve& roc_down);
bool assumption_cut_count_holds(const RocCurve& roc_up, const RocCurve& roc_down, double eps);

} // namespace froc

#endif
