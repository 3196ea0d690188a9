#ifndef FROC_CLASSIFIER_HPP
#define FROC_CLASSIFIER_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "froc/roc.hpp"
#include "froc/transport.hpp"

namespace froc {

// One of the classifiers available in ROC space: always-reject at (0,0),
// always-accept at (1,1), or the base classifier thresholded at a query
// point of one group's curve.
struct VertexClassifier {
    enum class Kind { AlwaysReject, AlwaysAccept, Threshold };
    Kind kind = Kind::AlwaysReject;
    int position = -1;        // 0-based curve position (Threshold only)
    int group = -1;           // base curve group (Threshold only)
    double threshold = 0.0;   // score cutoff (Threshold only)
    RocPoint point;           // operating point in ROC space

    static VertexClassifier reject() { return {Kind::AlwaysReject, -1, -1, 0.0, {0.0, 0.0}}; }
    static VertexClassifier accept() { return {Kind::AlwaysAccept, -1, -1, 0.0, {1.0, 1.0}}; }
};

// Convex mixture over three vertex classifiers realizing `target`.
struct Mixture {
    std::array<VertexClassifier, 3> vertices;
    std::array<double, 3> probs = {1.0, 0.0, 0.0};
    RocPoint target;

    RocPoint recomposed() const {
        RocPoint p;
        for (int v = 0; v < 3; ++v) {
            p.fpr += probs[static_cast<std::size_t>(v)] * vertices[static_cast<std::size_t>(v)].point.fpr;
            p.tpr += probs[static_cast<std::size_t>(v)] * vertices[static_cast<std::size_t>(v)].point.tpr;
        }
        return p;
    }
};

// Per-group, per-threshold mixtures realizing the transported curve, plus
// everything predict() needs to score raw inputs.
struct RandomizedClassifier {
    int k = 0;
    double norm_min = 0.0;
    double norm_max = 1.0;
    int up_group = 1;
    std::array<std::vector<Mixture>, 2> mixtures;  // [group][curve position]

    double threshold_of_position(int position) const {
        // Position 0 is the highest threshold t_k; position k-1 is t_1.
        return static_cast<double>(k - position) / k;
    }
};

// Probabilities (p_a, p_b, p_c) with p_a*qa + p_b*qb + p_c*qc = target and
// p_a + p_b + p_c = 1, from the 2x2 linear system in both coordinates.
// Throws std::invalid_argument for collinear vertices or a target outside
// the triangle (a barycentric coordinate below -1e-9).
std::array<double, 3> convex_mix(const RocPoint& target, const RocPoint& qa, const RocPoint& qb,
                                 const RocPoint& qc);

// Realizes a transport plan operationally. The down group passes through
// unchanged; up-group targets on the base PLA become two-vertex segment
// mixtures, interior targets become {reject, accept, base-threshold}
// mixtures over the first containing triangle.
RandomizedClassifier construct_classifier(const TransportPlan& plan, const RocCurve& base_up,
                                          const RocCurve& base_down, int up_group,
                                          const QueryGrid& grid, double norm_min = 0.0,
                                          double norm_max = 1.0);

// One randomized prediction at threshold index (1..k). Deterministic in
// (seed, sample_id); draws are independent across ids, so batch scoring
// parallelizes with stable results.
int predict(const RandomizedClassifier& rc, double score, int group, int threshold_index,
            std::uint64_t seed, std::uint64_t sample_id = 0);

// Empirical (fpr, tpr) of the randomized classifier per curve position for
// one group, Monte Carlo over the given rows. OpenMP-parallel across
// positions; results do not depend on the schedule.
RocCurve simulate_curve(const RandomizedClassifier& rc, const GroupedScores& data, int group,
                        std::uint64_t seed);

} // namespace froc

#endif
