#ifndef FROC_DATA_IO_HPP
#define FROC_DATA_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "froc/classifier.hpp"
#include "froc/roc.hpp"
#include "froc/transport.hpp"

namespace froc {

// Reads a "score,group,label" CSV (UTF-8, LF or CRLF), min-max normalizes
// scores to [0,1] and records the original (min, max). A constant score
// column maps to 0.5. Malformed rows and missing (group,label) cells throw
// DataError with the offending line.
GroupedScores load_scores(const std::filesystem::path& path);

void write_score_csv(const GroupedScores& data, const std::filesystem::path& path);

// Logistic score distribution for one (group, label) cell.
struct SyntheticCell {
    double location = 0.5;
    double scale = 0.1;
    int count = 1000;
};

struct SyntheticSpec {
    SyntheticCell cells[2][2];  // [group][label]
    std::uint64_t seed = 1;
};

struct SyntheticResult {
    GroupedScores data;
    SlopeBounds bounds;  // analytic: logistic density supremum 1/(4*scale)
};

// Deterministic sampler (scores clamped to [0,1]); the slope bounds are
// exact for the underlying distributions.
SyntheticResult generate_synthetic(const SyntheticSpec& spec);

SlopeBounds analytic_slope_bounds(const SyntheticSpec& spec);

// The distributional (infinite-sample) ROC of one group at the grid
// thresholds.
RocCurve analytic_roc(const SyntheticSpec& spec, int group, const QueryGrid& grid);

// Versioned JSON documents; export followed by import is the identity.
void export_curve(const RocCurve& curve, const std::filesystem::path& path);
RocCurve import_curve(const std::filesystem::path& path);

void export_plan(const TransportPlan& plan, const std::filesystem::path& path);
TransportPlan import_plan(const std::filesystem::path& path);

void export_classifier(const RandomizedClassifier& rc, const std::filesystem::path& path);
RandomizedClassifier import_classifier(const std::filesystem::path& path);

// Shortest round-trip decimal form (used for CSV emission so text outputs
// are reproducible bit for bit).
std::string format_double(double v);

} // namespace froc

#endif
