#include "hetcycle/dual_skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hetcycle {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Attracting: return "attracting";
        case Verdict::Repelling: return "repelling";
        case Verdict::EscapesSector: return "escapes-sector";
        case Verdict::Degenerate: return "degenerate";
        case Verdict::NotRealizable: return "not-realizable";
    }
    return "?";
}

CharacterVector character(const EquilibriumRecord& rec, int n_groups) {
    if (rec.kind != EqKind::Vertex)
        throw std::invalid_argument("character expects a vertex record");
    CharacterVector cv;
    cv.vertex = rec.index;
    cv.comp.assign(2 * n_groups, Rat(0));
    for (const auto& [face, l] : rec.face_eigs) {
        if (l == 0) throw std::invalid_argument("zero eigenvalue: character undefined");
        cv.comp[face - 1] = -l;
        cv.active.push_back(face);
    }
    std::sort(cv.active.begin(), cv.active.end());
    return cv;
}

Characters characters(const std::vector<EquilibriumRecord>& vertex_records, int n_groups) {
    Characters out(static_cast<size_t>(1 << n_groups) + 1);
    for (const auto& r : vertex_records) out[r.index] = character(r, n_groups);
    return out;
}

Sector::Where Sector::locate(double slope, double tol) const {
    if (empty) return Where::Outside;
    double lo = to_double(slope_lo);
    double scale = std::max(1.0, std::abs(slope));
    if (std::abs(slope - lo) <= tol * scale) return Where::Boundary;
    if (slope < lo) return Where::Outside;
    if (slope_hi) {
        double hi = to_double(*slope_hi);
        if (std::abs(slope - hi) <= tol * scale) return Where::Boundary;
        if (slope > hi) return Where::Outside;
    }
    return Where::Inside;
}

Mat2Q mat2_mul(const Mat2Q& a, const Mat2Q& b) {
    Mat2Q r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
    return r;
}

namespace {

// Normalize a slope bound into the strict-inequality list.
void finish_sector(Sector& s) {
    s.ineqs.clear();
    if (s.empty) return;
    if (s.slope_lo > 0) {
        // s > p/q  <=>  q u_i - p u_j > 0
        s.ineqs.push_back({Rat(denominator(s.slope_lo)), Rat(-numerator(s.slope_lo))});
    }
    if (s.slope_hi) {
        // s < p/q  <=>  -q u_i + p u_j > 0
        s.ineqs.push_back({Rat(-denominator(*s.slope_hi)), Rat(numerator(*s.slope_hi))});
    }
}

// Full (2n x 2n) matrix of L_{gamma,gamma'} at the shared vertex.
std::vector<std::vector<Rat>> l_matrix(const HeteroclinicGraph& g, const Characters& chars,
                                       int e_in, int e_out) {
    const Edge& ein = g.edge(e_in);
    const Edge& eout = g.edge(e_out);
    if (ein.target != eout.source)
        throw std::invalid_argument("edges are not consecutive: g" + std::to_string(e_in) +
                                    ", g" + std::to_string(e_out));
    int v = ein.target;
    const CharacterVector& cv = chars.at(v);
    if (cv.vertex != v) throw std::invalid_argument("missing character for vertex");
    // j* = face of F_v orthogonal to the outgoing edge
    int jstar = face_of(eout.axis, vertex_coords(v, g.n)[eout.axis]);
    const Rat& denom = cv.comp[jstar - 1];
    int dim = 2 * g.n;
    std::vector<std::vector<Rat>> L(dim, std::vector<Rat>(dim, Rat(0)));
    for (int j = 0; j < dim; ++j) L[j][j] = 1;
    for (int face : cv.active) L[face - 1][jstar - 1] -= cv.comp[face - 1] / denom;
    return L;
}

} // namespace

SectorMap branch_map(const HeteroclinicGraph& g, const Characters& chars, int edge_from,
                     int edge_to) {
    BranchData d = path_data(g, chars, {edge_from, edge_to});
    SectorMap sm;
    sm.from_edge = edge_from;
    sm.to_edge = edge_to;
    sm.M = d.M;
    sm.sector = d.sector;
    return sm;
}

BranchData path_data(const HeteroclinicGraph& g, const Characters& chars,
                     const std::vector<int>& edge_path) {
    if (edge_path.size() < 2) throw std::invalid_argument("path needs at least two edges");
    const auto& src_faces = g.edge(edge_path.front()).faces;
    if (src_faces.size() != 2)
        throw std::invalid_argument("dual skeleton requires two carrying faces per edge");
    int dim = 2 * g.n;
    std::vector<std::vector<Rat>> P(dim, std::vector<Rat>(dim, Rat(0)));
    for (int j = 0; j < dim; ++j) P[j][j] = 1;
    Sector sector;  // on (u_i, u_j) of the source edge
    int si = src_faces[0] - 1, sj = src_faces[1] - 1;
    for (size_t k = 0; k + 1 < edge_path.size(); ++k) {
        auto L = l_matrix(g, chars, edge_path[k], edge_path[k + 1]);
        // P <- L * P
        std::vector<std::vector<Rat>> N(dim, std::vector<Rat>(dim, Rat(0)));
        for (int r = 0; r < dim; ++r)
            for (int c : {si, sj})
                for (int t = 0; t < dim; ++t)
                    if (L[r][t] != 0 && P[t][c] != 0) N[r][c] += L[r][t] * P[t][c];
        P = std::move(N);
        // target coordinates must stay positive: alpha u_i + beta u_j > 0
        for (int face : g.edge(edge_path[k + 1]).faces) {
            const Rat& a = P[face - 1][si];
            const Rat& b = P[face - 1][sj];
            if (a >= 0 && b >= 0) continue;  // holds on the open quadrant
            if (a <= 0 && b <= 0) {          // impossible on the open quadrant
                sector.empty = true;
                finish_sector(sector);
                BranchData out;
                out.sector = sector;
                out.M = Mat2Q{};
                return out;
            }
            Rat bound = -b / a;
            if (a > 0) {
                if (bound > sector.slope_lo) sector.slope_lo = bound;
            } else {
                if (!sector.slope_hi || bound < *sector.slope_hi) sector.slope_hi = bound;
            }
        }
        if (sector.slope_hi && sector.slope_lo >= *sector.slope_hi) {
            sector.empty = true;
            finish_sector(sector);
            BranchData out;
            out.sector = sector;
            out.M = Mat2Q{};
            return out;
        }
    }
    finish_sector(sector);
    BranchData out;
    out.sector = sector;
    const auto& tgt_faces = g.edge(edge_path.back()).faces;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out.M.m[r][c] = P[tgt_faces[r] - 1][src_faces[c] - 1];
    return out;
}

std::vector<std::vector<int>> structural_sets(const HeteroclinicGraph& g) {
    if (g.cycles.empty()) return {};
    std::vector<std::set<int>> cyc_edges;
    for (const auto& c : g.cycles) {
        auto e = cycle_edges(g, c);
        cyc_edges.emplace_back(e.begin(), e.end());
    }
    int ne = static_cast<int>(g.edges.size());
    std::vector<std::vector<int>> found;
    std::vector<int> pick;
    auto hits_all = [&](const std::vector<int>& s) {
        for (const auto& ce : cyc_edges) {
            bool hit = false;
            for (int e : s)
                if (ce.count(e)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        return true;
    };
    for (int k = 1; k <= ne && found.empty(); ++k) {
        // enumerate k-subsets in lexicographic order
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            std::vector<int> s;
            for (int i : idx) s.push_back(g.edges[i].id);
            if (hits_all(s)) found.push_back(s);
            int p = k - 1;
            while (p >= 0 && idx[p] == ne - k + p) --p;
            if (p < 0) break;
            ++idx[p];
            for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    return found;
}

std::vector<int> pick_canonical(const std::vector<std::vector<int>>& sets) {
    if (sets.empty()) throw std::invalid_argument("no structural sets");
    return *std::min_element(sets.begin(), sets.end());
}

std::vector<SkeletonBranch> enumerate_s_branches(const std::vector<int>& s,
                                                 const HeteroclinicGraph& g) {
    std::set<int> sset(s.begin(), s.end());
    for (const auto& cyc : g.cycles) {
        bool hit = false;
        for (int e : cycle_edges(g, cyc))
            if (sset.count(e)) {
                hit = true;
                break;
            }
        if (!hit) {
            std::string name;
            for (int v : cyc) name += (name.empty() ? "v" : ",v") + std::to_string(v);
            throw std::invalid_argument("set is not structural: cycle {" + name + "} avoids it");
        }
    }
    std::vector<std::vector<int>> out_edges(static_cast<size_t>(1 << g.n) + 1);
    for (const auto& e : g.edges) out_edges[e.source].push_back(e.id);
    std::vector<SkeletonBranch> result;

    for (int start : s) {
        // iterative DFS over edge paths
        std::vector<std::vector<int>> stack{{start}};
        while (!stack.empty()) {
            std::vector<int> path = std::move(stack.back());
            stack.pop_back();
            int tail_vertex = g.edge(path.back()).target;
            for (int next : out_edges[tail_vertex]) {
                std::vector<int> np = path;
                np.push_back(next);
                if (sset.count(next)) {
                    SkeletonBranch b;
                    b.edges = np;
                    b.from_edge = start;
                    b.to_edge = next;
                    b.vertices.push_back(g.edge(np.front()).source);
                    for (int e : np) b.vertices.push_back(g.edge(e).target);
                    result.push_back(std::move(b));
                } else {
                    // an interior edge repeating means an S-avoiding cycle
                    auto it = std::find(np.begin(), np.end(), next);
                    if (it != np.end() - 1) {
                        std::string cyc;
                        for (auto jt = it; jt != np.end() - 1; ++jt)
                            cyc += (cyc.empty() ? "g" : ",g") + std::to_string(*jt);
                        throw std::invalid_argument(
                            "set is not structural: cycle {" + cyc + "} avoids it");
                    }
                    stack.push_back(std::move(np));
                }
            }
        }
    }
    // order: by position of the source edge in S, then target, then the
    // visited vertex sequence
    auto pos = [&](int e) {
        return std::find(s.begin(), s.end(), e) - s.begin();
    };
    std::sort(result.begin(), result.end(), [&](const SkeletonBranch& a, const SkeletonBranch& b) {
        if (pos(a.from_edge) != pos(b.from_edge)) return pos(a.from_edge) < pos(b.from_edge);
        if (pos(a.to_edge) != pos(b.to_edge)) return pos(a.to_edge) < pos(b.to_edge);
        return a.vertices < b.vertices;
    });
    for (size_t i = 0; i < result.size(); ++i) result[i].id = static_cast<int>(i) + 1;
    return result;
}

BranchData skeleton_matrix(const HeteroclinicGraph& g, const Characters& chars,
                           const SkeletonBranch& branch) {
    return path_data(g, chars, branch.edges);
}

BranchData cycle_matrix(const HeteroclinicGraph& g, const Characters& chars,
                        const std::vector<SkeletonBranch>& all_branches,
                        const std::vector<int>& branch_ids) {
    if (branch_ids.empty()) throw std::invalid_argument("empty concatenation");
    auto get = [&](int id) -> const SkeletonBranch& {
        for (const auto& b : all_branches)
            if (b.id == id) return b;
        throw std::invalid_argument("unknown branch id " + std::to_string(id));
    };
    std::vector<int> path = get(branch_ids.front()).edges;
    for (size_t k = 1; k < branch_ids.size(); ++k) {
        const auto& b = get(branch_ids[k]);
        if (b.from_edge != path.back())
            throw std::invalid_argument("mismatched concatenation at branch " +
                                        std::to_string(branch_ids[k]));
        path.insert(path.end(), b.edges.begin() + 1, b.edges.end());
    }
    if (path.back() != path.front())
        throw std::invalid_argument("concatenation does not close up");
    return path_data(g, chars, path);
}

BranchData cycle_matrix_from_cycle(const HeteroclinicGraph& g, const Characters& chars,
                                   const std::vector<int>& cycle, int base_edge) {
    auto edges = cycle_edges(g, cycle);
    auto it = std::find(edges.begin(), edges.end(), base_edge);
    if (it == edges.end())
        throw std::invalid_argument("base edge g" + std::to_string(base_edge) +
                                    " is not on the cycle");
    std::vector<int> path(it, edges.end());
    path.insert(path.end(), edges.begin(), it);
    path.push_back(base_edge);
    return path_data(g, chars, path);
}

namespace {

struct EigenPair {
    double lambda;
    double slope;       // v_i / v_j of the eigenvector, +-inf when v_j = 0
    bool quad;          // strictly inside the open quadrant
    std::optional<Rat> slope_exact;
};

std::optional<Rat> rational_sqrt(const Rat& q) {
    if (q < 0) return std::nullopt;
    Int n = numerator(q), d = denominator(q);
    Int sn = sqrt(n), sd = sqrt(d);
    if (sn * sn == n && sd * sd == d) return Rat(sn, sd);
    return std::nullopt;
}

EigenPair eigen_pair(const Mat2Q& M, double lambda, const std::optional<Rat>& lambda_exact) {
    // rows of (M - lambda I) are proportional; use the better one
    double m00 = to_double(M.m[0][0]), m01 = to_double(M.m[0][1]);
    double m10 = to_double(M.m[1][0]), m11 = to_double(M.m[1][1]);
    double v1a = m01, v2a = lambda - m00;       // from row 1
    double v1b = lambda - m11, v2b = m10;       // from row 2
    double v1, v2;
    if (std::max(std::abs(v1a), std::abs(v2a)) >= std::max(std::abs(v1b), std::abs(v2b))) {
        v1 = v1a;
        v2 = v2a;
    } else {
        v1 = v1b;
        v2 = v2b;
    }
    EigenPair p;
    p.lambda = lambda;
    if (v2 == 0) {
        p.slope = std::numeric_limits<double>::infinity();
        p.quad = false;
        return p;
    }
    p.slope = v1 / v2;
    p.quad = std::isfinite(p.slope) && p.slope > 0;
    if (lambda_exact) {
        // exact slope when the eigenvalue is rational
        Rat l = *lambda_exact;
        Rat e1a = M.m[0][1], e2a = l - M.m[0][0];
        Rat e1b = l - M.m[1][1], e2b = M.m[1][0];
        if (!(e1a == 0 && e2a == 0)) {
            if (e2a != 0) p.slope_exact = e1a / e2a;
        } else if (e2b != 0) {
            p.slope_exact = e1b / e2b;
        }
    }
    return p;
}

Sector::Where locate_pair(const Sector& sec, const EigenPair& p) {
    if (p.slope_exact) {
        const Rat& s = *p.slope_exact;
        if (s <= 0) return Sector::Where::Outside;
        if (s == sec.slope_lo) return Sector::Where::Boundary;
        if (s < sec.slope_lo) return Sector::Where::Outside;
        if (sec.slope_hi) {
            if (s == *sec.slope_hi) return Sector::Where::Boundary;
            if (s > *sec.slope_hi) return Sector::Where::Outside;
        }
        return Sector::Where::Inside;
    }
    if (!p.quad) return Sector::Where::Outside;
    return sec.locate(p.slope);
}

} // namespace

StabilityVerdict eigen_verdict(const Mat2Q& M, const Sector& sector,
                               const std::vector<std::pair<int, Sector>>* siblings) {
    StabilityVerdict v;
    if (sector.empty) {
        v.verdict = Verdict::NotRealizable;
        return v;
    }
    Rat tr = M.trace(), det = M.det();
    Rat disc = tr * tr - 4 * det;
    if (disc < 0) {
        v.verdict = Verdict::Degenerate;  // complex pair: outside the theory
        return v;
    }
    auto exact_root = rational_sqrt(disc);
    double sd = exact_root ? to_double(*exact_root) : std::sqrt(to_double(disc));
    double trd = to_double(tr);
    double lmax = (trd + sd) / 2.0, lmin = (trd - sd) / 2.0;
    v.lambda_max = lmax;
    v.lambda_min = lmin;
    double scale = std::max({1.0, std::abs(lmax), std::abs(lmin)});
    if (std::abs(lmax - lmin) <= 1e-10 * scale || !(det > 0 && tr > 0)) {
        // equal, nonpositive or sign-mixed eigenvalues
        v.verdict = Verdict::Degenerate;
        return v;
    }
    std::optional<Rat> lmax_exact, lmin_exact;
    if (exact_root) {
        lmax_exact = (tr + *exact_root) / 2;
        lmin_exact = (tr - *exact_root) / 2;
    }
    EigenPair pmax = eigen_pair(M, lmax, lmax_exact);
    EigenPair pmin = eigen_pair(M, lmin, lmin_exact);
    if (std::isfinite(pmax.slope)) v.perron = {pmax.slope, 1.0};
    auto wmax = locate_pair(sector, pmax);
    auto wmin = locate_pair(sector, pmin);
    v.boundary = wmax == Sector::Where::Boundary || wmin == Sector::Where::Boundary;
    if (wmax == Sector::Where::Inside) {
        v.verdict = Verdict::Attracting;
        v.in_sector = true;
        v.multiplier = lmin / lmax;
        return v;
    }
    if (wmin == Sector::Where::Inside) {
        v.verdict = Verdict::Repelling;
        v.multiplier = lmax / lmin;
        return v;
    }
    if (v.boundary) {
        v.verdict = Verdict::Degenerate;
        return v;
    }
    v.verdict = Verdict::EscapesSector;
    if (siblings && pmax.quad) {
        for (const auto& [id, sec] : *siblings)
            if (sec.locate(pmax.slope) == Sector::Where::Inside) {
                v.escapes_to = id;
                break;
            }
    }
    return v;
}

} // namespace hetcycle
