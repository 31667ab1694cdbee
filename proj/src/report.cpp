#include "hetcycle/report.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>

namespace hetcycle {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json num(double v) { return json::parse(fmt17(v)); }

json complex_json(const std::complex<double>& z) {
    return json{{"re", num(z.real())}, {"im", num(z.imag())}};
}

json rats(const std::vector<Rat>& v) {
    json a = json::array();
    for (const Rat& q : v) a.push_back(to_string(q));
    return a;
}

json mat2_json(const Mat2Q& m) {
    return json::array({json::array({to_string(m.m[0][0]), to_string(m.m[0][1])}),
                        json::array({to_string(m.m[1][0]), to_string(m.m[1][1])})});
}

json sector_json(const Sector& s) {
    json j;
    j["empty"] = s.empty;
    json ineqs = json::array();
    for (const auto& iq : s.ineqs)
        ineqs.push_back(json{{"ci", to_string(iq.ci)}, {"cj", to_string(iq.cj)}, {"rel", ">"}});
    j["ineqs"] = ineqs;
    j["slope_lo"] = to_string(s.slope_lo);
    if (s.slope_hi) j["slope_hi"] = to_string(*s.slope_hi);
    return j;
}

json verdict_json(const StabilityVerdict& v) {
    json j;
    j["verdict"] = to_string(v.verdict);
    j["subject"] = v.subject;
    if (v.verdict != Verdict::NotRealizable && v.verdict != Verdict::Degenerate) {
        j["lambda_max"] = num(v.lambda_max);
        j["lambda_min"] = num(v.lambda_min);
        j["perron"] = json::array({num(v.perron[0]), num(v.perron[1])});
        j["in_sector"] = v.in_sector;
        j["multiplier"] = num(v.multiplier);
    }
    if (v.escapes_to) j["escapes_to"] = v.escapes_to;
    if (v.boundary) j["boundary"] = true;
    return j;
}

json point_json(const ProjectivePoint& p) {
    json j;
    j["x"] = num(p.x);
    j["period"] = p.period;
    j["itinerary"] = p.itinerary;
    j["multiplier"] = num(p.multiplier);
    j["verdict"] = to_string(p.verdict);
    return j;
}

} // namespace

nlohmann::json analysis_report(const MuAnalysis& an) {
    json j;
    j["provenance"] = json{{"tool", "hetcycle"},
                           {"version", kToolVersion},
                           {"tolerances",
                            json{{"hyperbolic", 1e-8},
                                 {"eigen", 1e-10},
                                 {"bisection", 1e-8},
                                 {"neutral_band", 1e-9}}}};
    if (an.mu) {
        j["mu"] = to_string(*an.mu);
        j["mu_value"] = num(to_double(*an.mu));
    }
    j["game"] = game_to_json(an.game);

    json eqs = json::array();
    auto push_eq = [&](const EquilibriumRecord& r) {
        json e;
        std::string id = r.kind == EqKind::Vertex          ? "v" + std::to_string(r.index)
                         : r.kind == EqKind::FaceInterior  ? "s" + std::to_string(r.index)
                                                           : "O";
        e["kind"] = to_string(r.kind);
        e["id"] = id;
        json x = json::array();
        for (double c : r.x) x.push_back(num(c));
        e["x"] = x;
        if (!r.x_exact.empty()) e["x_exact"] = rats(r.x_exact);
        json ev = json::array();
        for (const auto& l : r.eigenvalues) ev.push_back(complex_json(l));
        e["eigenvalues"] = ev;
        e["class"] = to_string(r.cls);
        if (!r.face_eigs.empty()) {
            json fe;
            for (const auto& [face, l] : r.face_eigs) fe[std::to_string(face)] = to_string(l);
            e["face_eigenvalues"] = fe;
        }
        eqs.push_back(e);
    };
    for (const auto& r : an.vertices) push_eq(r);
    for (const auto& r : an.faces) push_eq(r);
    if (an.interior) push_eq(*an.interior);
    j["equilibria"] = eqs;

    json graph;
    json edges = json::array();
    for (const auto& e : an.graph.edges)
        edges.push_back(json{
            {"id", e.id}, {"source", e.source}, {"target", e.target}, {"faces", e.faces}});
    graph["edges"] = edges;
    json cycles = json::array();
    for (const auto& ci : an.cycles)
        cycles.push_back(json{{"name", ci.name}, {"vertices", ci.vertices}, {"edges", ci.edges}});
    graph["cycles"] = cycles;
    graph["switching_nodes"] = switching_nodes(an.graph);
    graph["edge_sign_violations"] = an.edge_sign_issues;
    j["graph"] = graph;

    json structural;
    structural["minimum_sets"] = an.min_structural_sets;
    structural["selected"] = an.s_edges;
    j["structural"] = structural;

    json branches = json::array();
    for (size_t i = 0; i < an.branches.size(); ++i) {
        const auto& b = an.branches[i];
        json bj;
        bj["id"] = b.id;
        bj["edges"] = b.edges;
        bj["from"] = b.from_edge;
        bj["to"] = b.to_edge;
        bj["matrix"] = mat2_json(an.branch_data[i].M);
        bj["sector"] = sector_json(an.branch_data[i].sector);
        bj["verdict"] = verdict_json(an.branch_verdicts[i]);
        branches.push_back(bj);
    }
    j["branches"] = branches;

    json cverd = json::array();
    for (const auto& ci : an.cycles) {
        json cj;
        cj["name"] = ci.name;
        cj["vertices"] = ci.vertices;
        cj["base_edge"] = ci.base_edge;
        if (!ci.data.sector.empty) cj["matrix"] = mat2_json(ci.data.M);
        cj["sector"] = sector_json(ci.data.sector);
        cj["verdict"] = verdict_json(ci.verdict);
        cverd.push_back(cj);
    }
    j["cycle_verdicts"] = cverd;

    json proj;
    proj["s_edges"] = an.pmap.s_edges;
    json pieces = json::array();
    for (const auto& p : an.pmap.pieces) {
        json pj;
        pj["branch"] = p.branch_id;
        pj["interval"] = json::array({to_string(p.lo), to_string(p.hi)});
        pj["src_slot"] = p.src_slot;
        pj["dst_slot"] = p.dst_slot;
        pj["mobius"] =
            json::array({to_string(p.a), to_string(p.b), to_string(p.c), to_string(p.d)});
        pieces.push_back(pj);
    }
    proj["pieces"] = pieces;
    json fps = json::array();
    for (const auto& p : an.fixed_pts) fps.push_back(point_json(p));
    proj["fixed_points"] = fps;
    json pps = json::array();
    for (const auto& p : an.periodic_pts) pps.push_back(point_json(p));
    proj["periodic_points"] = pps;
    proj["warnings"] = an.pmap.warnings;
    j["projective"] = proj;

    json regime;
    regime["case"] = an.regime.case_id;
    regime["likely"] = an.regime.likely;
    regime["glue"] = an.regime.glue;
    regime["indeterminate"] = an.regime.indeterminate;
    regime["note"] = an.regime.note;
    j["regime"] = regime;
    return j;
}

std::string report_to_string(const nlohmann::json& report) { return report.dump(2) + "\n"; }

bool validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                             std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    if (schema.contains("type")) {
        std::string t = schema["type"].get<std::string>();
        bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                  (t == "string" && doc.is_string()) || (t == "number" && doc.is_number()) ||
                  (t == "integer" && doc.is_number_integer()) ||
                  (t == "boolean" && doc.is_boolean());
        if (!ok) return fail("expected type " + t + ", got " + std::string(doc.type_name()));
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema["enum"])
            if (v == doc) ok = true;
        if (!ok) return fail("value not in enum: " + doc.dump());
    }
    if (schema.contains("required")) {
        for (const auto& k : schema["required"])
            if (!doc.contains(k.get<std::string>()))
                return fail("missing required key '" + k.get<std::string>() + "'");
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
            if (!doc.contains(it.key())) continue;
            std::string sub;
            if (!validate_against_schema(doc[it.key()], it.value(), &sub))
                return fail(it.key() + ": " + sub);
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (size_t i = 0; i < doc.size(); ++i) {
            std::string sub;
            if (!validate_against_schema(doc[i], schema["items"], &sub))
                return fail("[" + std::to_string(i) + "]: " + sub);
        }
    }
    return true;
}

// ---------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------

namespace {

constexpr int kW = 800, kH = 600;
constexpr double kMargin = 60.0;

std::string f2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kFills[] = {"#cfe8ff", "#ffe3c2", "#d8f5d0", "#f5d0e8", "#fff3b0", "#d9d2f0"};

struct Frame {
    double m;  // data range [0, m] on both axes
    double px(double x) const { return kMargin + x / m * (kW - 2 * kMargin); }
    double py(double y) const { return kH - kMargin - y / m * (kH - 2 * kMargin); }
};

std::string svg_header(const std::string& title) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    s += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"16\">" + title + "</text>\n";
    return s;
}

std::string axes(const Frame& fr) {
    std::string s;
    s += "<line x1=\"" + f2(fr.px(0)) + "\" y1=\"" + f2(fr.py(0)) + "\" x2=\"" +
         f2(fr.px(fr.m)) + "\" y2=\"" + f2(fr.py(0)) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + f2(fr.px(0)) + "\" y1=\"" + f2(fr.py(0)) + "\" x2=\"" +
         f2(fr.px(0)) + "\" y2=\"" + f2(fr.py(fr.m)) + "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= static_cast<int>(fr.m); ++k) {
        s += "<text x=\"" + f2(fr.px(k)) + "\" y=\"" + f2(fr.py(0) + 20) +
             "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
             std::to_string(k) + "</text>\n";
        s += "<text x=\"" + f2(fr.px(0) - 16) + "\" y=\"" + f2(fr.py(k) + 4) +
             "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
             std::to_string(k) + "</text>\n";
    }
    return s;
}

std::string interval_shading(const ProjectiveMap& map, const Frame& fr) {
    std::string s;
    for (size_t i = 0; i < map.pieces.size(); ++i) {
        const auto& p = map.pieces[i];
        double lo = to_double(p.lo), hi = to_double(p.hi);
        s += "<rect x=\"" + f2(fr.px(lo)) + "\" y=\"" + f2(fr.py(fr.m)) + "\" width=\"" +
             f2(fr.px(hi) - fr.px(lo)) + "\" height=\"" + f2(fr.py(0) - fr.py(fr.m)) +
             "\" fill=\"" + kFills[i % 6] + "\" fill-opacity=\"0.5\"/>\n";
        s += "<text x=\"" + f2(0.5 * (fr.px(lo) + fr.px(hi))) + "\" y=\"" +
             f2(fr.py(0) - 6) + "\" text-anchor=\"middle\" font-family=\"monospace\" "
             "font-size=\"11\">J" + std::to_string(p.branch_id) + "</text>\n";
    }
    return s;
}

std::string phi_curve(const ProjectiveMap& map, const Frame& fr) {
    std::string s;
    // identity for reference
    s += "<line x1=\"" + f2(fr.px(0)) + "\" y1=\"" + f2(fr.py(0)) + "\" x2=\"" +
         f2(fr.px(fr.m)) + "\" y2=\"" + f2(fr.py(fr.m)) +
         "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& p : map.pieces) {
        double lo = to_double(p.lo), hi = to_double(p.hi);
        std::string pts;
        const int samples = 200;
        for (int k = 1; k < samples; ++k) {
            double x = lo + (hi - lo) * k / samples;
            double y = p.eval(x);
            pts += f2(fr.px(x)) + "," + f2(fr.py(y)) + " ";
        }
        s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#1040a0\" "
             "stroke-width=\"1.5\"/>\n";
    }
    return s;
}

} // namespace

std::string svg_projective(const ProjectiveMap& map, const std::string& title) {
    Frame fr{static_cast<double>(map.slots())};
    std::string s = svg_header(title);
    s += interval_shading(map, fr);
    s += axes(fr);
    s += phi_curve(map, fr);
    s += "</svg>\n";
    return s;
}

std::string svg_cobweb(const ProjectiveMap& map, double start, int iters,
                       const std::string& title) {
    Frame fr{static_cast<double>(map.slots())};
    std::string s = svg_header(title);
    s += interval_shading(map, fr);
    s += axes(fr);
    s += phi_curve(map, fr);
    std::string pts;
    double x = start;
    double y = 0;
    pts += f2(fr.px(x)) + "," + f2(fr.py(y)) + " ";
    for (int i = 0; i < iters; ++i) {
        double fx;
        try {
            fx = evaluate(map, x).y;
        } catch (const std::exception&) {
            break;
        }
        pts += f2(fr.px(x)) + "," + f2(fr.py(fx)) + " ";
        pts += f2(fr.px(fx)) + "," + f2(fr.py(fx)) + " ";
        x = fx;
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#e07820\" "
         "stroke-width=\"1\"/>\n";
    s += "<circle cx=\"" + f2(fr.px(start)) + "\" cy=\"" + f2(fr.py(0)) +
         "\" r=\"4\" fill=\"#1040a0\"/>\n";
    s += "</svg>\n";
    return s;
}

std::string svg_graph(const HeteroclinicGraph& g, const std::vector<int>& switching,
                      const std::string& title) {
    // oblique cube projection
    auto pos = [&](int vid) {
        auto c = vertex_coords(vid, g.n);
        double x = 180 + c[0] * 320 + c[1] * 130;
        double y = 470 - c[2] * 300 - c[1] * 90;
        return std::pair<double, double>(x, y);
    };
    std::string s = svg_header(title);
    s += "<defs><marker id=\"arr\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
         "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">"
         "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#1040a0\"/></marker></defs>\n";
    for (const auto& e : g.edges) {
        auto [x1, y1] = pos(e.source);
        auto [x2, y2] = pos(e.target);
        // shorten toward the target so the arrowhead clears the node circle
        double dx = x2 - x1, dy = y2 - y1;
        double len = std::hypot(dx, dy);
        double ux = dx / len, uy = dy / len;
        s += "<line x1=\"" + f2(x1 + 14 * ux) + "\" y1=\"" + f2(y1 + 14 * uy) + "\" x2=\"" +
             f2(x2 - 14 * ux) + "\" y2=\"" + f2(y2 - 14 * uy) +
             "\" stroke=\"#1040a0\" stroke-width=\"1.5\" marker-end=\"url(#arr)\"/>\n";
        s += "<text x=\"" + f2(0.5 * (x1 + x2) + 8 * uy) + "\" y=\"" +
             f2(0.5 * (y1 + y2) - 8 * ux) +
             "\" font-family=\"monospace\" font-size=\"11\" fill=\"#555555\">g" +
             std::to_string(e.id) + "</text>\n";
    }
    for (int vid = 1; vid <= (1 << g.n); ++vid) {
        auto [x, y] = pos(vid);
        bool sw = std::find(switching.begin(), switching.end(), vid) != switching.end();
        s += "<circle cx=\"" + f2(x) + "\" cy=\"" + f2(y) + "\" r=\"12\" fill=\"" +
             (sw ? std::string("#ffd28a") : std::string("#cfe8ff")) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + f2(x) + "\" y=\"" + f2(y + 4) +
             "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">v" +
             std::to_string(vid) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace hetcycle
