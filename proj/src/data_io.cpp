#include "froc/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "froc/rng.hpp"

namespace froc {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_binary(const std::string& field, const char* what, std::size_t line) {
    if (field == "0") return 0;
    if (field == "1") return 1;
    throw DataError("line " + std::to_string(line) + ": " + what + " must be 0 or 1, got '" +
                    field + "'");
}

} // namespace

GroupedScores load_scores(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
    ++lineno;
    if (trim(line) != "score,group,label")
        throw DataError(path.string() + ": header must be exactly 'score,group,label'");

    GroupedScores out;
    bool cell_seen[2][2] = {{false, false}, {false, false}};
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        std::string f_score, f_group, f_label;
        if (!std::getline(ss, f_score, ',') || !std::getline(ss, f_group, ',') ||
            !std::getline(ss, f_label, ','))
            throw DataError("line " + std::to_string(lineno) + ": expected 3 comma-separated fields");
        std::string extra;
        if (std::getline(ss, extra, ','))
            throw DataError("line " + std::to_string(lineno) + ": too many fields");

        ScoreRow row;
        const std::string fs = trim(f_score);
        const char* begin = fs.data();
        const char* end = fs.data() + fs.size();
        const auto res = std::from_chars(begin, end, row.score);
        if (res.ec != std::errc{} || res.ptr != end)
            throw DataError("line " + std::to_string(lineno) + ": bad score '" + fs + "'");
        if (!std::isfinite(row.score))
            throw DataError("line " + std::to_string(lineno) + ": score must be finite");
        row.group = parse_binary(trim(f_group), "group", lineno);
        row.label = parse_binary(trim(f_label), "label", lineno);
        cell_seen[row.group][row.label] = true;
        out.rows.push_back(row);
    }
    if (out.rows.empty()) throw DataError(path.string() + ": no data rows");
    for (int g = 0; g < 2; ++g)
        for (int y = 0; y < 2; ++y)
            if (!cell_seen[g][y])
                throw DataError(path.string() + ": no rows with group=" + std::to_string(g) +
                                ", label=" + std::to_string(y));

    double lo = out.rows.front().score, hi = lo;
    for (const ScoreRow& r : out.rows) {
        lo = std::min(lo, r.score);
        hi = std::max(hi, r.score);
    }
    out.norm_min = lo;
    out.norm_max = hi;
    if (hi == lo) {
        for (ScoreRow& r : out.rows) r.score = 0.5;
    } else {
        for (ScoreRow& r : out.rows) r.score = (r.score - lo) / (hi - lo);
    }
    return out;
}

void write_score_csv(const GroupedScores& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "score,group,label\n";
    for (const ScoreRow& r : data.rows)
        out << format_double(r.score) << ',' << r.group << ',' << r.label << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

SlopeBounds analytic_slope_bounds(const SyntheticSpec& spec) {
    SlopeBounds b;
    for (int g = 0; g < 2; ++g) {
        b.u_t = std::max(b.u_t, 1.0 / (4.0 * spec.cells[g][1].scale));
        b.u_f = std::max(b.u_f, 1.0 / (4.0 * spec.cells[g][0].scale));
    }
    return b;
}

SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
    for (int g = 0; g < 2; ++g)
        for (int y = 0; y < 2; ++y) {
            if (!(spec.cells[g][y].scale > 0.0))
                throw std::invalid_argument("generate_synthetic: scale must be > 0");
            if (spec.cells[g][y].count < 1)
                throw std::invalid_argument("generate_synthetic: count must be >= 1");
        }

    SyntheticResult out;
    SplitMix64 rng(spec.seed);
    for (int g = 0; g < 2; ++g) {
        for (int y = 0; y < 2; ++y) {
            const SyntheticCell& cell = spec.cells[g][y];
            for (int i = 0; i < cell.count; ++i) {
                double u = rng.uniform();
                while (u <= 0.0) u = rng.uniform();
                const double raw = cell.location + cell.scale * std::log(u / (1.0 - u));
                out.data.rows.push_back({std::clamp(raw, 0.0, 1.0), g, y});
            }
        }
    }
    out.bounds = analytic_slope_bounds(spec);
    return out;
}

RocCurve analytic_roc(const SyntheticSpec& spec, int group, const QueryGrid& grid) {
    if (group != 0 && group != 1) throw std::invalid_argument("analytic_roc: group must be 0 or 1");
    const auto survival = [](const SyntheticCell& cell, double t) {
        // P(score >= t) of the clamped logistic equals the raw survival on (0,1].
        return 1.0 / (1.0 + std::exp((t - cell.location) / cell.scale));
    };
    RocCurve curve;
    curve.points.reserve(static_cast<std::size_t>(grid.k));
    for (int i = grid.k; i >= 1; --i) {
        const double t = grid.threshold(i);
        curve.points.push_back(
            {survival(spec.cells[group][0], t), survival(spec.cells[group][1], t)});
    }
    return curve;
}

namespace {

json point_to_json(const RocPoint& p) { return json{{"fpr", p.fpr}, {"tpr", p.tpr}}; }

RocPoint point_from_json(const json& j) { return {j.at("fpr").get<double>(), j.at("tpr").get<double>()}; }

json points_to_json(const std::vector<RocPoint>& pts) {
    json arr = json::array();
    for (const RocPoint& p : pts) arr.push_back(point_to_json(p));
    return arr;
}

std::vector<RocPoint> points_from_json(const json& arr) {
    std::vector<RocPoint> pts;
    pts.reserve(arr.size());
    for (const json& j : arr) pts.push_back(point_from_json(j));
    return pts;
}

void write_document(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

json read_document(const std::filesystem::path& path, const char* expected_kind) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    if (doc.value("format_version", 0) != 1)
        throw DataError(path.string() + ": unsupported format_version");
    if (doc.value("kind", "") != expected_kind)
        throw DataError(path.string() + ": expected kind '" + expected_kind + "'");
    return doc;
}

json vertex_to_json(const VertexClassifier& v) {
    json j;
    switch (v.kind) {
        case VertexClassifier::Kind::AlwaysReject: j["kind"] = "always_reject"; break;
        case VertexClassifier::Kind::AlwaysAccept: j["kind"] = "always_accept"; break;
        case VertexClassifier::Kind::Threshold:
            j["kind"] = "threshold";
            j["position"] = v.position;
            j["group"] = v.group;
            j["threshold"] = v.threshold;
            break;
    }
    j["point"] = point_to_json(v.point);
    return j;
}

VertexClassifier vertex_from_json(const json& j) {
    VertexClassifier v;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "always_reject") {
        v = VertexClassifier::reject();
    } else if (kind == "always_accept") {
        v = VertexClassifier::accept();
    } else if (kind == "threshold") {
        v.kind = VertexClassifier::Kind::Threshold;
        v.position = j.at("position").get<int>();
        v.group = j.at("group").get<int>();
        v.threshold = j.at("threshold").get<double>();
    } else {
        throw DataError("unknown vertex kind '" + kind + "'");
    }
    v.point = point_from_json(j.at("point"));
    return v;
}

} // namespace

void export_curve(const RocCurve& curve, const std::filesystem::path& path) {
    json doc{{"format_version", 1}, {"kind", "curve"}, {"points", points_to_json(curve.points)}};
    write_document(doc, path);
}

RocCurve import_curve(const std::filesystem::path& path) {
    const json doc = read_document(path, "curve");
    return RocCurve(points_from_json(doc.at("points")));
}

void export_plan(const TransportPlan& plan, const std::filesystem::path& path) {
    json decisions = json::array();
    for (const ShiftDecision& d : plan.decisions) {
        decisions.push_back(json{{"kind", to_string(d.kind)},
                                 {"target", point_to_json(d.target)},
                                 {"target_raw", point_to_json(d.target_raw)}});
    }
    json doc{{"format_version", 1},
             {"kind", "plan"},
             {"eps", plan.eps},
             {"decisions", decisions},
             {"fair_up", points_to_json(plan.fair_up.points)},
             {"fair_down", points_to_json(plan.fair_down.points)},
             {"diagnostics", plan.diagnostics}};
    write_document(doc, path);
}

TransportPlan import_plan(const std::filesystem::path& path) {
    const json doc = read_document(path, "plan");
    TransportPlan plan;
    plan.eps = doc.at("eps").get<double>();
    for (const json& j : doc.at("decisions")) {
        ShiftDecision d;
        d.kind = shift_kind_from_string(j.at("kind").get<std::string>());
        d.target = point_from_json(j.at("target"));
        d.target_raw = point_from_json(j.at("target_raw"));
        plan.decisions.push_back(d);
    }
    plan.fair_up = RocCurve(points_from_json(doc.at("fair_up")));
    plan.fair_down = RocCurve(points_from_json(doc.at("fair_down")));
    plan.diagnostics = doc.at("diagnostics").get<std::vector<std::string>>();
    return plan;
}

void export_classifier(const RandomizedClassifier& rc, const std::filesystem::path& path) {
    json groups = json::array();
    for (int g = 0; g < 2; ++g) {
        json mixtures = json::array();
        for (const Mixture& m : rc.mixtures[static_cast<std::size_t>(g)]) {
            json verts = json::array();
            for (const VertexClassifier& v : m.vertices) verts.push_back(vertex_to_json(v));
            mixtures.push_back(json{{"vertices", verts},
                                    {"probs", m.probs},
                                    {"target", point_to_json(m.target)}});
        }
        groups.push_back(mixtures);
    }
    json doc{{"format_version", 1},
             {"kind", "classifier"},
             {"k", rc.k},
             {"norm_min", rc.norm_min},
             {"norm_max", rc.norm_max},
             {"up_group", rc.up_group},
             {"mixtures", groups}};
    write_document(doc, path);
}

RandomizedClassifier import_classifier(const std::filesystem::path& path) {
    const json doc = read_document(path, "classifier");
    RandomizedClassifier rc;
    rc.k = doc.at("k").get<int>();
    rc.norm_min = doc.at("norm_min").get<double>();
    rc.norm_max = doc.at("norm_max").get<double>();
    rc.up_group = doc.at("up_group").get<int>();
    const json& groups = doc.at("mixtures");
    if (groups.size() != 2) throw DataError(path.string() + ": expected 2 mixture groups");
    for (std::size_t g = 0; g < 2; ++g) {
        for (const json& jm : groups[g]) {
            Mixture m;
            const json& verts = jm.at("vertices");
            if (verts.size() != 3) throw DataError(path.string() + ": mixture needs 3 vertices");
            for (std::size_t v = 0; v < 3; ++v) m.vertices[v] = vertex_from_json(verts[v]);
            const auto probs = jm.at("probs").get<std::vector<double>>();
            if (probs.size() != 3) throw DataError(path.string() + ": mixture needs 3 probs");
            std::copy(probs.begin(), probs.end(), m.probs.begin());
            m.target = point_from_json(jm.at("target"));
            rc.mixtures[g].push_back(std::move(m));
        }
    }
    return rc;
}

} // namespace froc
