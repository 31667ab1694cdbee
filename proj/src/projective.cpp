#include "hetcycle/projective.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace hetcycle {

std::string to_string(ProjectivePoint::Stability s) {
    switch (s) {
        case ProjectivePoint::Stability::Attracting: return "attracting";
        case ProjectivePoint::Stability::Repelling: return "repelling";
        case ProjectivePoint::Stability::Neutral: return "neutral";
    }
    return "?";
}

double MobiusBranch::eval(double x) const {
    double ad = to_double(a), bd = to_double(b), cd = to_double(c), dd = to_double(d);
    return (ad * x + bd) / (cd * x + dd);
}

double MobiusBranch::deriv(double x) const {
    double ad = to_double(a), bd = to_double(b), cd = to_double(c), dd = to_double(d);
    double den = cd * x + dd;
    return (ad * dd - bd * cd) / (den * den);
}

const MobiusBranch* ProjectiveMap::piece_at(double x, double breakpoint_tol) const {
    for (const auto& p : pieces) {
        double lo = to_double(p.lo), hi = to_double(p.hi);
        if (x <= lo + breakpoint_tol || x >= hi - breakpoint_tol) continue;
        return &p;
    }
    return nullptr;
}

ProjectiveMap build_projective_map(const HeteroclinicGraph& g, const Characters& chars,
                                   const std::vector<int>& s_edges,
                                   const std::vector<SkeletonBranch>& branches) {
    ProjectiveMap map;
    map.s_edges = s_edges;
    std::sort(map.s_edges.begin(), map.s_edges.end());
    auto slot_of = [&](int edge) {
        auto it = std::find(map.s_edges.begin(), map.s_edges.end(), edge);
        if (it == map.s_edges.end()) throw std::invalid_argument("edge not in structural set");
        return static_cast<int>(it - map.s_edges.begin());
    };
    for (const auto& br : branches) {
        BranchData d = skeleton_matrix(g, chars, br);
        if (d.sector.empty) {
            map.warnings.push_back("branch " + std::to_string(br.id) +
                                   " has an empty sector; omitted");
            continue;
        }
        MobiusBranch mb;
        mb.branch_id = br.id;
        mb.src_slot = slot_of(br.from_edge);
        mb.dst_slot = slot_of(br.to_edge);
        // slope interval (lo, hi) -> t in (lo/(1+lo), hi/(1+hi)), t = x - slot
        Rat k(mb.src_slot), kp(mb.dst_slot);
        Rat tlo = d.sector.slope_lo / (1 + d.sector.slope_lo);
        Rat thi = d.sector.slope_hi ? *d.sector.slope_hi / (1 + *d.sector.slope_hi) : Rat(1);
        mb.lo = k + tlo;
        mb.hi = k + thi;
        // phi(x) = kp + (al t + bl) / (cl t + dl), t = x - k
        Rat al = d.M.m[0][0] - d.M.m[0][1];
        Rat bl = d.M.m[0][1];
        Rat cl = d.M.m[0][0] - d.M.m[0][1] + d.M.m[1][0] - d.M.m[1][1];
        Rat dl = d.M.m[0][1] + d.M.m[1][1];
        mb.a = kp * cl + al;
        mb.b = kp * (dl - cl * k) + bl - al * k;
        mb.c = cl;
        mb.d = dl - cl * k;
        map.pieces.push_back(std::move(mb));
    }
    std::sort(map.pieces.begin(), map.pieces.end(),
              [](const MobiusBranch& x, const MobiusBranch& y) { return x.lo < y.lo; });
    return map;
}

EvalResult evaluate(const ProjectiveMap& map, double x) {
    if (x < 0 || x > map.slots())
        throw std::out_of_range("projective map argument outside [0, #S]");
    // slot boundaries are fixed boundary points
    if (std::abs(x - std::round(x)) < 1e-12) return {x, 0};
    const MobiusBranch* p = map.piece_at(x);
    if (!p) throw std::domain_error("evaluation at a breakpoint of the projective map");
    return {p->eval(x), p->branch_id};
}

double derivative(const ProjectiveMap& map, double x) {
    const MobiusBranch* p = map.piece_at(x);
    if (!p) throw std::domain_error("derivative at a breakpoint of the projective map");
    return p->deriv(x);
}

namespace {

ProjectivePoint::Stability stability_of(double multiplier) {
    if (std::abs(multiplier - 1.0) <= 1e-9) return ProjectivePoint::Stability::Neutral;
    return multiplier < 1.0 ? ProjectivePoint::Stability::Attracting
                            : ProjectivePoint::Stability::Repelling;
}

struct Mobius {
    Rat a, b, c, d;
};

Mobius compose(const Mobius& outer, const Mobius& inner) {
    return {outer.a * inner.a + outer.b * inner.c, outer.a * inner.b + outer.b * inner.d,
            outer.c * inner.a + outer.d * inner.c, outer.c * inner.b + outer.d * inner.d};
}

// real roots of c x^2 + (d - a) x - b = 0
std::vector<double> mobius_fixed_roots(const Mobius& m) {
    double A = to_double(m.c), B = to_double(m.d - m.a), C = to_double(-m.b);
    std::vector<double> roots;
    if (std::abs(A) < 1e-300) {
        if (std::abs(B) > 1e-300) roots.push_back(-C / B);
        return roots;
    }
    double disc = B * B - 4 * A * C;
    if (disc < 0) return roots;
    double s = std::sqrt(disc);
    double q = -0.5 * (B + (B >= 0 ? s : -s));
    roots.push_back(q / A);
    if (std::abs(q) > 1e-300) roots.push_back(C / q);
    return roots;
}

} // namespace

std::vector<ProjectivePoint> fixed_points(const ProjectiveMap& map) {
    std::vector<ProjectivePoint> out;
    for (const auto& p : map.pieces) {
        if (p.src_slot != p.dst_slot) continue;
        Mobius m{p.a, p.b, p.c, p.d};
        for (double r : mobius_fixed_roots(m)) {
            double lo = to_double(p.lo), hi = to_double(p.hi);
            double guard = 1e-12 * std::max(1.0, std::abs(r));
            if (!(r > lo + guard && r < hi - guard)) continue;
            ProjectivePoint pt;
            pt.x = r;
            pt.period = 1;
            pt.itinerary = {p.branch_id};
            pt.multiplier = std::abs(p.deriv(r));
            pt.verdict = stability_of(pt.multiplier);
            out.push_back(pt);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ProjectivePoint& a, const ProjectivePoint& b) { return a.x < b.x; });
    return out;
}

std::vector<ProjectivePoint> periodic_points(const ProjectiveMap& map, int max_period) {
    std::vector<ProjectivePoint> out;
    if (max_period < 2) return out;
    int np = static_cast<int>(map.pieces.size());
    // all cyclic piece-index sequences with matching slots, canonical
    // rotation (lexicographically smallest), period 2..max_period
    std::vector<int> seq;
    std::set<std::vector<int>> seen;
    auto emit = [&](const std::vector<int>& itin) {
        // canonical rotation
        std::vector<int> best = itin;
        for (size_t r = 1; r < itin.size(); ++r) {
            std::vector<int> rot(itin.begin() + r, itin.end());
            rot.insert(rot.end(), itin.begin(), itin.begin() + r);
            if (rot < best) best = rot;
        }
        if (!seen.insert(best).second) return;
        // compose along the canonical rotation
        Mobius comp{map.pieces[best[0]].a, map.pieces[best[0]].b, map.pieces[best[0]].c,
                    map.pieces[best[0]].d};
        for (size_t k = 1; k < best.size(); ++k) {
            const auto& pc = map.pieces[best[k]];
            comp = compose({pc.a, pc.b, pc.c, pc.d}, comp);
        }
        for (double r : mobius_fixed_roots(comp)) {
            // every iterate must sit strictly inside its piece
            double x = r;
            bool ok = true;
            double mult = 1.0;
            std::vector<int> branch_itin;
            for (size_t k = 0; k < best.size() && ok; ++k) {
                const auto& pc = map.pieces[best[k]];
                double lo = to_double(pc.lo), hi = to_double(pc.hi);
                double guard = 1e-12 * std::max(1.0, std::abs(x));
                if (!(x > lo + guard && x < hi - guard)) ok = false;
                if (!ok) break;
                if (k > 0 && std::abs(x - r) < 1e-10) ok = false;  // shorter period
                mult *= std::abs(pc.deriv(x));
                branch_itin.push_back(pc.branch_id);
                x = pc.eval(x);
            }
            if (!ok || std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(r))) continue;
            ProjectivePoint pt;
            pt.x = r;
            pt.period = static_cast<int>(best.size());
            pt.itinerary = branch_itin;
            pt.multiplier = mult;
            pt.verdict = stability_of(mult);
            out.push_back(pt);
        }
    };
    auto dfs = [&](auto&& self, int first, int last, int remaining) -> void {
        if (remaining == 0) {
            if (map.pieces[last].dst_slot == map.pieces[first].src_slot) emit(seq);
            return;
        }
        for (int nxt = 0; nxt < np; ++nxt) {
            if (map.pieces[nxt].src_slot != map.pieces[last].dst_slot) continue;
            seq.push_back(nxt);
            self(self, first, nxt, remaining - 1);
            seq.pop_back();
        }
    };
    for (int period = 2; period <= max_period; ++period) {
        for (int first = 0; first < np; ++first) {
            seq = {first};
            dfs(dfs, first, first, period - 1);
        }
    }
    // drop duplicates of the same orbit discovered under different periods
    std::vector<ProjectivePoint> uniq;
    for (auto& p : out) {
        bool dup = false;
        for (auto& u : uniq)
            if (std::abs(u.x - p.x) < 1e-9) dup = true;
        if (!dup) uniq.push_back(std::move(p));
    }
    std::sort(uniq.begin(), uniq.end(),
              [](const ProjectivePoint& a, const ProjectivePoint& b) { return a.x < b.x; });
    return uniq;
}

// ---------------------------------------------------------------------
// mu-family regime classification
// ---------------------------------------------------------------------

namespace {

struct CycleVerdict {
    std::string name;
    std::vector<int> vertices;
    StabilityVerdict sv;
};

struct FamilyParts {
    PolymatrixGame game;
    std::vector<EquilibriumRecord> vspec;
    HeteroclinicGraph graph;
    Characters chars;
    std::vector<EquilibriumRecord> faces;
    std::vector<CycleVerdict> cycles;
};

FamilyParts family_parts(const Rat& mu, bool with_faces = true) {
    FamilyParts fp;
    fp.game = build_mu_family(mu);
    fp.vspec = vertex_spectrum(fp.game);
    fp.graph = build_graph(fp.vspec, fp.game.n_groups());
    fp.chars = characters(fp.vspec, fp.game.n_groups());
    if (with_faces) fp.faces = face_equilibria(fp.game);
    int generic = 0;
    for (const auto& cyc : fp.graph.cycles) {
        CycleVerdict cv;
        cv.vertices = cyc;
        cv.name = cycle_name(cyc);
        if (cv.name.empty()) cv.name = "C" + std::to_string(++generic);
        auto edges = cycle_edges(fp.graph, cyc);
        int base = *std::min_element(edges.begin(), edges.end());
        BranchData d = cycle_matrix_from_cycle(fp.graph, fp.chars, cyc, base);
        cv.sv = eigen_verdict(d.M, d.sector);
        cv.sv.subject = cv.name;
        fp.cycles.push_back(std::move(cv));
    }
    return fp;
}

RegimeRecord classify_from_parts(const FamilyParts& fp, double mu_d) {
    RegimeRecord r;
    r.mu = mu_d;
    std::vector<std::string> attr, rep;
    bool boundary = false, degenerate_realizable = false;
    for (const auto& cv : fp.cycles) {
        if (cv.sv.boundary) boundary = true;
        switch (cv.sv.verdict) {
            case Verdict::Attracting: attr.push_back(cv.name); break;
            case Verdict::Repelling: rep.push_back(cv.name); break;
            case Verdict::Degenerate: degenerate_realizable = true; break;
            default: break;
        }
    }
    bool faces_nonhyperbolic = false, faces_all_sinks = !fp.faces.empty();
    for (const auto& f : fp.faces) {
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
        // face equilibria by ascending face id carry their customary names
        for (size_t i = 0; i < fp.faces.size(); ++i) r.likely.push_back("B" + std::to_string(i + 1));
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

RegimeRecord classify_regime(const Rat& mu, int /*max_period*/) {
    FamilyParts fp = family_parts(mu);
    return classify_from_parts(fp, to_double(mu));
}

std::vector<BifurcationEvent> detect_thresholds(double mu_lo, double mu_hi, int grid) {
    if (!(mu_lo < mu_hi)) throw std::invalid_argument("empty bracket");
    if (grid < 2) grid = 2;
    // verdict signature per cycle name, on a grid; bisect category changes
    auto signature = [](const Rat& mu) {
        FamilyParts fp = family_parts(mu, false);
        std::map<std::string, int> sig;
        for (const auto& cv : fp.cycles) sig[cv.name] = static_cast<int>(cv.sv.verdict);
        return sig;
    };
    std::vector<double> mus(grid + 1);
    std::vector<std::map<std::string, int>> sigs(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        mus[i] = mu_lo + (mu_hi - mu_lo) * i / grid;
        sigs[i] = signature(Rat(mus[i]));
    }
    std::vector<BifurcationEvent> events;
    for (int i = 0; i < grid; ++i) {
        if (sigs[i] == sigs[i + 1]) continue;
        // bisect the leftmost change in this cell
        double lo = mus[i], hi = mus[i + 1];
        auto slo = sigs[i];
        while (hi - lo > 1e-9) {
            double mid = 0.5 * (lo + hi);
            if (signature(Rat(mid)) == slo)
                lo = mid;
            else
                hi = mid;
        }
        double star = 0.5 * (lo + hi);
        // name the cycles whose category changed
        auto sa = signature(Rat(lo)), sb = signature(Rat(hi));
        std::string subject;
        for (const auto& [name, cat] : sa)
            if (sb.count(name) && sb.at(name) != cat) subject += (subject.empty() ? "" : ",") + name;
        BifurcationEvent ev;
        ev.kind = BifurcationEvent::Kind::SectorCrossing;
        ev.mu_star = star;
        ev.subject = subject.empty() ? "cycles" : subject;
        ev.mu_lo = mus[i];
        ev.mu_hi = mus[i + 1];
        ev.residual = hi - lo;
        events.push_back(ev);
    }
    // transcritical and Hopf crossings, when bracketed
    auto face_re = [](double mu) {
        auto faces = face_equilibria(build_mu_family(Rat(mu)));
        if (faces.empty()) return std::numeric_limits<double>::quiet_NaN();
        for (const auto& l : faces[0].eigenvalues)
            if (std::abs(l.imag()) > 1e-9) return l.real();
        return std::numeric_limits<double>::quiet_NaN();
    };
    auto interior_re = [](double mu) {
        auto o = interior_equilibrium(build_mu_family(Rat(mu)));
        if (!o) return std::numeric_limits<double>::quiet_NaN();
        for (const auto& l : o->eigenvalues)
            if (std::abs(l.imag()) > 1e-9) return l.real();
        return std::numeric_limits<double>::quiet_NaN();
    };
    for (int i = 0; i < grid; ++i) {
        double fa = face_re(mus[i]), fb = face_re(mus[i + 1]);
        if (std::isfinite(fa) && std::isfinite(fb) && fa * fb < 0)
            events.push_back(find_transcritical(mus[i], mus[i + 1]));
        double ia = interior_re(mus[i]), ib = interior_re(mus[i + 1]);
        if (std::isfinite(ia) && std::isfinite(ib) && ia * ib < 0)
            events.push_back(find_hopf(mus[i], mus[i + 1]));
    }
    // merge events at the same location; structural kinds win over
    // sector crossings
    std::sort(events.begin(), events.end(),
              [](const BifurcationEvent& a, const BifurcationEvent& b) {
                  return a.mu_star < b.mu_star;
              });
    std::vector<BifurcationEvent> merged;
    for (auto& ev : events) {
        if (!merged.empty() && std::abs(merged.back().mu_star - ev.mu_star) < 1e-6) {
            auto& prev = merged.back();
            if (prev.kind == BifurcationEvent::Kind::SectorCrossing &&
                ev.kind != BifurcationEvent::Kind::SectorCrossing)
                prev = ev;
            continue;
        }
        merged.push_back(ev);
    }
    return merged;
}

} // namespace hetcycle
