// froc: post-processing tool that transports one group's ROC curve toward
// the other's so the two stay within an L1 budget at every threshold, then
// realizes the result as a randomized classifier.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <vector>

#include "froc/classifier.hpp"
#include "froc/data_io.hpp"
#include "froc/metrics.hpp"
#include "froc/oracle.hpp"
#include "froc/roc.hpp"
#include "froc/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace froc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitUnfair = 3;
constexpr int kExitInfeasible = 4;

struct GroupCurves {
    RocCurve curves[2];
    int up_group = 1;
    std::string dominance_note;
};

GroupCurves build_curves(const GroupedScores& data, const QueryGrid& grid) {
    GroupCurves out;
    out.curves[0] = empirical_roc(data, 0, grid);
    out.curves[1] = empirical_roc(data, 1, grid);
    const DominanceResult dom = dominance(out.curves[0], out.curves[1]);
    switch (dom.kind) {
        case DominanceResult::Kind::Curve0Up:
            out.up_group = 0;
            break;
        case DominanceResult::Kind::Curve1Up:
            out.up_group = 1;
            break;
        case DominanceResult::Kind::Intersecting: {
            out.up_group = auc(out.curves[1]) >= auc(out.curves[0]) ? 1 : 0;
            out.dominance_note = "warning: group ROCs intersect (" +
                                 std::to_string(dom.crossing_fprs.size()) + " sign changes";
            out.dominance_note += dom.crossings_corner_confined
                                      ? ", confined to fpr <= 0.2 or tpr >= 0.5)"
                                      : ")";
            break;
        }
    }
    return out;
}

double raw_score(const GroupedScores& data, const ScoreRow& row) {
    return data.norm_min + row.score * (data.norm_max - data.norm_min);
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string());
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw DataError("cannot write " + p.string());
    return out;
}

// Pooled Monte Carlo accuracy and disparate impact of the randomized
// classifier at one threshold index, with at least `min_draws` total
// prediction draws.
struct EvalPoint {
    double accuracy = 0.0;
    double disparate_impact = 1.0;
    double eo_gap = 0.0;
};

EvalPoint evaluate_at_index(const RandomizedClassifier& rc, const GroupedScores& data, int index,
                            std::uint64_t seed, std::int64_t min_draws = 100000) {
    const std::int64_t n = static_cast<std::int64_t>(data.rows.size());
    const std::int64_t passes = std::max<std::int64_t>(1, (min_draws + n - 1) / n);

    std::int64_t correct = 0, total = 0;
    std::int64_t pos_pred[2] = {0, 0}, count[2] = {0, 0};
    std::int64_t tp[2] = {0, 0}, fp[2] = {0, 0}, pos_n[2] = {0, 0}, neg_n[2] = {0, 0};
#pragma omp parallel for schedule(static) reduction(+ : correct, total) \
    reduction(+ : pos_pred[:2], count[:2], tp[:2], fp[:2], pos_n[:2], neg_n[:2])
    for (std::int64_t i = 0; i < n; ++i) {
        const ScoreRow& row = data.rows[static_cast<std::size_t>(i)];
        const double raw = raw_score(data, row);
        for (std::int64_t pass = 0; pass < passes; ++pass) {
            const std::uint64_t id =
                static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(pass) * 0x100000001ULL;
            const int yhat = predict(rc, raw, row.group, index, seed, id);
            correct += yhat == row.label;
            ++total;
            pos_pred[row.group] += yhat;
            ++count[row.group];
            if (row.label == 1) {
                ++pos_n[row.group];
                tp[row.group] += yhat;
            } else {
                ++neg_n[row.group];
                fp[row.group] += yhat;
            }
        }
    }

    EvalPoint out;
    out.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    const double r0 = static_cast<double>(pos_pred[0]) / static_cast<double>(count[0]);
    const double r1 = static_cast<double>(pos_pred[1]) / static_cast<double>(count[1]);
    out.disparate_impact =
        (r0 == 0.0 && r1 == 0.0) ? 1.0 : std::min(r0, r1) / std::max(r0, r1);
    const auto stats = [&](int g) {
        return ThresholdStats::from_rates(
            static_cast<double>(fp[g]) / static_cast<double>(neg_n[g]),
            static_cast<double>(tp[g]) / static_cast<double>(pos_n[g]));
    };
    out.eo_gap = eo_gap(stats(0), stats(1));
    return out;
}

int cmd_roc(const std::string& input, int k, const fs::path& out_dir) {
    const GroupedScores data = load_scores(input);
    const QueryGrid grid(k);
    const GroupCurves gc = build_curves(data, grid);
    ensure_out_dir(out_dir);
    export_curve(gc.curves[0], out_dir / "roc_group0.json");
    export_curve(gc.curves[1], out_dir / "roc_group1.json");

    const std::vector<RocPoint> pts0 = gc.curves[0].anchored();
    const std::vector<RocPoint> pts1 = gc.curves[1].anchored();
    std::ofstream csv = open_out(out_dir / "roc_curves.csv");
    csv << "alpha,tpr_group0,tpr_group1,gap\n";
    for (int i = 0; i <= 1000; ++i) {
        const double a = i / 1000.0;
        const double t0 = interpolate_sorted(pts0, a);
        const double t1 = interpolate_sorted(pts1, a);
        csv << format_double(a) << ',' << format_double(t0) << ',' << format_double(t1) << ','
            << format_double(std::abs(t1 - t0)) << '\n';
    }

    const SlopeBounds est0 = estimate_slope_bounds(gc.curves[0], grid);
    const SlopeBounds est1 = estimate_slope_bounds(gc.curves[1], grid);
    if (!gc.dominance_note.empty()) std::cerr << gc.dominance_note << '\n';
    std::cout << "group0: auc=" << format_double(auc(gc.curves[0]))
              << " slope estimates u_T=" << format_double(est0.u_t)
              << " u_F=" << format_double(est0.u_f) << '\n';
    std::cout << "group1: auc=" << format_double(auc(gc.curves[1]))
              << " slope estimates u_T=" << format_double(est1.u_t)
              << " u_F=" << format_double(est1.u_f) << '\n';
    std::cout << "up group: " << gc.up_group << '\n';
    return kExitOk;
}

json fairness_json(const FairnessReport& rep, double eps) {
    return json{{"eps", eps},
                {"max_index_gap", rep.max_index_gap},
                {"max_dense_gap", rep.max_dense_gap},
                {"pass", rep.pass}};
}

int cmd_transport(const std::string& input, int k, double eps, bool repair,
                  const fs::path& out_dir) {
    const GroupedScores data = load_scores(input);
    const QueryGrid grid(k);
    const GroupCurves gc = build_curves(data, grid);
    if (!gc.dominance_note.empty()) std::cerr << gc.dominance_note << '\n';

    TransportOptions opts;
    opts.repair_monotone = repair;
    const RocCurve& up = gc.curves[gc.up_group];
    const RocCurve& down = gc.curves[1 - gc.up_group];
    const TransportPlan plan = fair_roc(up, down, eps, opts);
    const FairnessReport rep = verify_fairness(plan.fair_up, plan.fair_down, eps);

    ensure_out_dir(out_dir);
    export_plan(plan, out_dir / "plan.json");
    json report = fairness_json(rep, eps);
    report["up_group"] = gc.up_group;
    report["auc_loss"] = auc_loss(plan, up);
    open_out(out_dir / "fairness_report.json") << report.dump(2) << '\n';

    for (const std::string& d : plan.diagnostics) std::cerr << "diagnostic: " << d << '\n';
    std::cout << "max_index_gap=" << format_double(rep.max_index_gap)
              << " max_dense_gap=" << format_double(rep.max_dense_gap)
              << " auc_loss=" << format_double(auc_loss(plan, up))
              << " pass=" << (rep.pass ? "yes" : "no") << '\n';
    return rep.pass ? kExitOk : kExitUnfair;
}

int cmd_classify(const std::string& input, int k, double eps, bool repair,
                 const fs::path& out_dir) {
    const GroupedScores data = load_scores(input);
    const QueryGrid grid(k);
    const GroupCurves gc = build_curves(data, grid);
    if (!gc.dominance_note.empty()) std::cerr << gc.dominance_note << '\n';

    TransportOptions opts;
    opts.repair_monotone = repair;
    const RocCurve& up = gc.curves[gc.up_group];
    const RocCurve& down = gc.curves[1 - gc.up_group];
    const TransportPlan plan = fair_roc(up, down, eps, opts);
    const RandomizedClassifier rc = construct_classifier(plan, up, down, gc.up_group, grid,
                                                         data.norm_min, data.norm_max);
    ensure_out_dir(out_dir);
    export_plan(plan, out_dir / "plan.json");
    export_classifier(rc, out_dir / "classifier.json");
    std::cout << "classifier written with k=" << k << " up_group=" << gc.up_group << '\n';
    return kExitOk;
}

int cmd_evaluate(const std::string& input, const std::string& classifier_path,
                 std::uint64_t seed, const fs::path& out_dir) {
    const GroupedScores data = load_scores(input);
    const RandomizedClassifier rc = import_classifier(classifier_path);

    ensure_out_dir(out_dir);
    std::ofstream csv = open_out(out_dir / "evaluation.csv");
    csv << "threshold_index,threshold,accuracy,disparate_impact,eo_gap\n";
    double best_acc = -1.0;
    int best_index = 1;
    for (int index = 1; index <= rc.k; ++index) {
        const EvalPoint p = evaluate_at_index(rc, data, index, seed);
        csv << index << ',' << format_double(static_cast<double>(index) / rc.k) << ','
            << format_double(p.accuracy) << ',' << format_double(p.disparate_impact) << ','
            << format_double(p.eo_gap) << '\n';
        if (p.accuracy > best_acc) {
            best_acc = p.accuracy;
            best_index = index;
        }
    }
    std::cout << "best threshold index " << best_index
              << " accuracy=" << format_double(best_acc) << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& input, int k, double eps_start, double eps_stop, int eps_steps,
              std::uint64_t seed, bool repair, const fs::path& out_dir) {
    if (!(eps_start < eps_stop) || eps_steps < 2)
        throw CLI::ValidationError("sweep requires eps-start < eps-stop and eps-steps >= 2");
    const GroupedScores data = load_scores(input);
    const QueryGrid grid(k);
    const GroupCurves gc = build_curves(data, grid);
    if (!gc.dominance_note.empty()) std::cerr << gc.dominance_note << '\n';
    const RocCurve& up = gc.curves[gc.up_group];
    const RocCurve& down = gc.curves[1 - gc.up_group];

    struct SweepRow {
        double eps, auc_loss, accuracy, di, max_gap;
    };
    std::vector<SweepRow> rows(static_cast<std::size_t>(eps_steps));

    TransportOptions opts;
    opts.repair_monotone = repair;
    // Sweep points are independent; the per-point seed depends only on the
    // point index so the output is byte-identical however it is scheduled.
    for (int s = 0; s < eps_steps; ++s) {
        const double eps =
            eps_start + (eps_stop - eps_start) * static_cast<double>(s) / (eps_steps - 1);
        const TransportPlan plan = fair_roc(up, down, eps, opts);
        const FairnessReport rep = verify_fairness(plan.fair_up, plan.fair_down, eps);
        const RandomizedClassifier rc = construct_classifier(plan, up, down, gc.up_group, grid,
                                                             data.norm_min, data.norm_max);
        double best_acc = -1.0;
        double di_at_best = 1.0;
        const std::uint64_t point_seed = seed + static_cast<std::uint64_t>(s) * 7919ULL;
        for (int index = 1; index <= k; ++index) {
            const EvalPoint p = evaluate_at_index(rc, data, index, point_seed);
            if (p.accuracy > best_acc) {
                best_acc = p.accuracy;
                di_at_best = p.disparate_impact;
            }
        }
        rows[static_cast<std::size_t>(s)] =
            SweepRow{eps, auc_loss(plan, up), best_acc, di_at_best, rep.max_index_gap};
    }

    ensure_out_dir(out_dir);
    std::ofstream csv = open_out(out_dir / "sweep.csv");
    csv << "eps,auc_loss,accuracy_at_best_threshold,disparate_impact,max_gap\n";
    for (const SweepRow& r : rows) {
        csv << format_double(r.eps) << ',' << format_double(r.auc_loss) << ','
            << format_double(r.accuracy) << ',' << format_double(r.di) << ','
            << format_double(r.max_gap) << '\n';
    }
    std::cout << "sweep written: " << eps_steps << " points\n";
    return kExitOk;
}

int cmd_oracle_compare(const std::string& input, int k, double eps, double delta,
                       bool boundary_only, const fs::path& out_dir) {
    const GroupedScores data = load_scores(input);
    const QueryGrid grid(k);
    const GroupCurves gc = build_curves(data, grid);
    const RocCurve& up = gc.curves[gc.up_group];
    const RocCurve& down = gc.curves[1 - gc.up_group];

    const OptimalityReport rep = optimality_report(up, down, eps, delta, boundary_only);
    ensure_out_dir(out_dir);
    json doc{{"froc_auc", rep.froc_auc},
             {"oracle_auc", rep.oracle_auc},
             {"gap", rep.gap},
             {"assumption_42_holds", rep.assumption_42_holds},
             {"spacing_holds", rep.spacing_holds},
             {"cut_count_holds", rep.cut_count_holds},
             {"eps", eps},
             {"delta", delta}};
    open_out(out_dir / "oracle_report.json") << doc.dump(2) << '\n';
    std::cout << "froc_auc=" << format_double(rep.froc_auc)
              << " oracle_auc=" << format_double(rep.oracle_auc)
              << " gap=" << format_double(rep.gap)
              << " assumption_42=" << (rep.assumption_42_holds ? "holds" : "violated") << '\n';
    return kExitOk;
}

bool parse_cell(const std::string& s, SyntheticCell& cell) {
    std::istringstream ss(s);
    char c1 = 0, c2 = 0;
    ss >> cell.location >> c1 >> cell.scale >> c2 >> cell.count;
    return bool(ss) && c1 == ',' && c2 == ',';
}

int cmd_gen_synthetic(const std::string& out_file, std::uint64_t seed,
                      const std::string& g0_neg, const std::string& g0_pos,
                      const std::string& g1_neg, const std::string& g1_pos) {
    SyntheticSpec spec;
    spec.seed = seed;
    if (!parse_cell(g0_neg, spec.cells[0][0]) || !parse_cell(g0_pos, spec.cells[0][1]) ||
        !parse_cell(g1_neg, spec.cells[1][0]) || !parse_cell(g1_pos, spec.cells[1][1]))
        throw CLI::ValidationError("cell spec must be 'location,scale,count'");
    const SyntheticResult res = generate_synthetic(spec);
    write_score_csv(res.data, out_file);
    std::cout << "wrote " << res.data.rows.size() << " rows; analytic bounds u_T="
              << format_double(res.bounds.u_t) << " u_F=" << format_double(res.bounds.u_f)
              << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ROC transport post-processing for threshold-robust group fairness"};
    app.require_subcommand(1);

    std::string input, classifier_path, out_dir = ".";
    int k = 100;
    double eps = 0.05, delta = 1e-3;
    double eps_start = 0.01, eps_stop = 0.1;
    int eps_steps = 10;
    std::uint64_t seed = 1;
    bool repair = false;
    bool boundary_only = true;

    auto* roc = app.add_subcommand("roc", "build group ROC curves and plot data");
    roc->add_option("--input", input)->required();
    roc->add_option("--k", k);
    roc->add_option("--out", out_dir);

    auto* transport = app.add_subcommand("transport", "run the ROC transport and verify fairness");
    transport->add_option("--input", input)->required();
    transport->add_option("--k", k);
    transport->add_option("--eps", eps);
    transport->add_flag("--repair-monotone", repair);
    transport->add_option("--out", out_dir);

    auto* classify = app.add_subcommand("classify", "build the randomized classifier");
    classify->add_option("--input", input)->required();
    classify->add_option("--k", k);
    classify->add_option("--eps", eps);
    classify->add_flag("--repair-monotone", repair);
    classify->add_option("--out", out_dir);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a classifier on a score file");
    evaluate->add_option("--input", input)->required();
    evaluate->add_option("--classifier", classifier_path)->required();
    evaluate->add_option("--seed", seed);
    evaluate->add_option("--out", out_dir);

    auto* sweep = app.add_subcommand("sweep", "metrics across a range of eps values");
    sweep->add_option("--input", input)->required();
    sweep->add_option("--k", k);
    sweep->add_option("--eps-start", eps_start);
    sweep->add_option("--eps-stop", eps_stop);
    sweep->add_option("--eps-steps", eps_steps);
    sweep->add_option("--seed", seed);
    sweep->add_flag("--repair-monotone", repair);
    sweep->add_option("--out", out_dir);

    auto* oracle = app.add_subcommand("oracle-compare", "compare against the exhaustive optimum");
    oracle->add_option("--input", input)->required();
    oracle->add_option("--k", k);
    oracle->add_option("--eps", eps);
    oracle->add_option("--delta", delta);
    oracle->add_flag("--boundary-only,!--no-boundary-only", boundary_only);
    oracle->add_option("--out", out_dir);

    std::string g0_neg = "0.4,0.12,5000", g0_pos = "0.6,0.12,5000";
    std::string g1_neg = "0.35,0.12,5000", g1_pos = "0.7,0.12,5000";
    auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic score file");
    gen->add_option("--out", out_dir)->required();
    gen->add_option("--seed", seed);
    gen->add_option("--g0-neg", g0_neg, "location,scale,count for group 0 negatives");
    gen->add_option("--g0-pos", g0_pos, "location,scale,count for group 0 positives");
    gen->add_option("--g1-neg", g1_neg, "location,scale,count for group 1 negatives");
    gen->add_option("--g1-pos", g1_pos, "location,scale,count for group 1 positives");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (roc->parsed()) return cmd_roc(input, k, out_dir);
        if (transport->parsed()) return cmd_transport(input, k, eps, repair, out_dir);
        if (classify->parsed()) return cmd_classify(input, k, eps, repair, out_dir);
        if (evaluate->parsed()) return cmd_evaluate(input, classifier_path, seed, out_dir);
        if (sweep->parsed())
            return cmd_sweep(input, k, eps_start, eps_stop, eps_steps, seed, repair, out_dir);
        if (oracle->parsed()) return cmd_oracle_compare(input, k, eps, delta, boundary_only, out_dir);
        if (gen->parsed())
            return cmd_gen_synthetic(out_dir, seed, g0_neg, g0_pos, g1_neg, g1_pos);
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
