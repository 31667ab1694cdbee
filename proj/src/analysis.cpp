#include "hetcycle/analysis.hpp"

#include <algorithm>

namespace hetcycle {

namespace {

RegimeRecord regime_from(const MuAnalysis& an) {
    RegimeRecord r;
    r.mu = an.mu ? to_double(*an.mu) : 0.0;
    std::vector<std::string> attr, rep;
    bool boundary = false, degenerate_realizable = false;
    for (const auto& ci : an.cycles) {
        if (ci.verdict.boundary) boundary = true;
        switch (ci.verdict.verdict) {
            case Verdict::Attracting: attr.push_back(ci.name); break;
            case Verdict::Repelling: rep.push_back(ci.name); break;
            case Verdict::Degenerate: degenerate_realizable = true; break;
            default: break;
        }
    }
    bool faces_nonhyperbolic = false, faces_all_sinks = !an.faces.empty();
    for (const auto& f : an.faces) {
        if (f.cls == EqClass::NonHyperbolic) faces_nonhyperbolic = true;
        if (f.cls != EqClass::Sink) faces_all_sinks = false;
    }
    std::sort(attr.begin(), attr.end());
    std::sort(rep.begin(), rep.end());
    if (boundary || degenerate_realizable || faces_nonhyperbolic || rep.size() > 1) {
        r.indeterminate = true;
        r.case_id = "indeterminate";
        r.note = boundary ? "an eigenvector sits on a sector boundary"
                 : degenerate_realizable
                     ? "a realizable cycle matrix has equal, complex or nonpositive eigenvalues"
                 : faces_nonhyperbolic ? "a face equilibrium is non-hyperbolic"
                                       : "more than one repelling cycle";
        return r;
    }
    if (rep.empty() && attr.size() == 1) {
        r.case_id = "a";
        r.likely = attr;
        r.glue = attr.front();
        return r;
    }
    if (attr.empty() && rep.size() == 1 && faces_all_sinks) {
        r.case_id = "e";
        for (size_t i = 0; i < an.faces.size(); ++i) r.likely.push_back("B" + std::to_string(i + 1));
        r.glue = rep.front();
        return r;
    }
    if (attr.size() == 2 && rep.size() == 1) {
        r.likely = attr;
        r.glue = rep.front();
        r.case_id = r.glue == "H2" ? "b" : r.glue == "H4" ? "c" : r.glue == "H5" ? "d" : "other";
        return r;
    }
    r.indeterminate = true;
    r.case_id = "indeterminate";
    r.note = "verdict pattern matches no known regime";
    return r;
}

} // namespace

MuAnalysis analyze(const PolymatrixGame& game, std::optional<Rat> mu, int max_period,
                   std::vector<int> s_override) {
    MuAnalysis an;
    an.mu = std::move(mu);
    an.game = game.reduced ? game : reduce_payoff(game);
    an.vertices = vertex_spectrum(an.game);
    an.faces = face_equilibria(an.game);
    an.interior = interior_equilibrium(an.game);
    an.graph = build_graph(an.vertices, an.game.n_groups());
    an.chars = characters(an.vertices, an.game.n_groups());
    an.edge_sign_issues = edge_sign_violations(an.game, an.graph);
    an.min_structural_sets = structural_sets(an.graph);
    an.s_edges = s_override.empty() ? pick_canonical(an.min_structural_sets)
                                    : std::move(s_override);
    std::sort(an.s_edges.begin(), an.s_edges.end());
    an.branches = enumerate_s_branches(an.s_edges, an.graph);
    for (const auto& b : an.branches) {
        an.branch_data.push_back(skeleton_matrix(an.graph, an.chars, b));
    }
    // sibling sectors per source edge resolve escape targets
    for (size_t i = 0; i < an.branches.size(); ++i) {
        std::vector<std::pair<int, Sector>> siblings;
        for (size_t j = 0; j < an.branches.size(); ++j)
            if (an.branches[j].from_edge == an.branches[i].from_edge)
                siblings.emplace_back(an.branches[j].id, an.branch_data[j].sector);
        auto sv = eigen_verdict(an.branch_data[i].M, an.branch_data[i].sector, &siblings);
        sv.subject = "xi" + std::to_string(an.branches[i].id);
        an.branch_verdicts.push_back(std::move(sv));
    }
    int generic = 0;
    for (const auto& cyc : an.graph.cycles) {
        CycleInfo ci;
        ci.vertices = cyc;
        ci.edges = cycle_edges(an.graph, cyc);
        ci.name = cycle_name(cyc);
        if (ci.name.empty()) ci.name = "C" + std::to_string(++generic);
        ci.base_edge = *std::min_element(ci.edges.begin(), ci.edges.end());
        ci.data = cycle_matrix_from_cycle(an.graph, an.chars, cyc, ci.base_edge);
        ci.verdict = eigen_verdict(ci.data.M, ci.data.sector);
        ci.verdict.subject = ci.name;
        an.cycles.push_back(std::move(ci));
    }
    an.pmap = build_projective_map(an.graph, an.chars, an.s_edges, an.branches);
    an.fixed_pts = fixed_points(an.pmap);
    an.periodic_pts = periodic_points(an.pmap, max_period);
    an.regime = regime_from(an);
    return an;
}

} // namespace hetcycle
