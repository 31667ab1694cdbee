#include "hetcycle/network.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace hetcycle {

int HeteroclinicGraph::out_degree(int vertex) const {
    int d = 0;
    for (const auto& e : edges)
        if (e.source == vertex) ++d;
    return d;
}

int HeteroclinicGraph::edge_between(int a, int b) const {
    for (const auto& e : edges)
        if (e.source == a && e.target == b) return e.id;
    return 0;
}

HeteroclinicGraph build_graph(const std::vector<EquilibriumRecord>& spectra, int n_groups) {
    int n = n_groups;
    if (static_cast<int>(spectra.size()) != (1 << n))
        throw std::invalid_argument("expected one spectrum record per vertex");
    // face id -> eigenvalue lookup per vertex
    std::vector<std::map<int, Rat>> eig(spectra.size() + 1);
    for (const auto& r : spectra) {
        if (r.kind != EqKind::Vertex) throw std::invalid_argument("non-vertex record");
        for (const auto& [face, l] : r.face_eigs) eig[r.index][face] = l;
    }
    HeteroclinicGraph g;
    g.n = n;
    int next_id = 1;
    // canonical order: varying axis descending, fixed coordinates as a
    // binary number (ascending axes, most significant first)
    for (int axis = n - 1; axis >= 0; --axis) {
        std::vector<int> other;
        for (int a = 0; a < n; ++a)
            if (a != axis) other.push_back(a);
        for (int bits = 0; bits < (1 << (n - 1)); ++bits) {
            std::vector<int> c0(n, 0), c1(n, 0);
            for (size_t k = 0; k < other.size(); ++k) {
                int bit = (bits >> (other.size() - 1 - k)) & 1;
                c0[other[k]] = bit;
                c1[other[k]] = bit;
            }
            c0[axis] = 0;
            c1[axis] = 1;
            int va = vertex_id(c0), vb = vertex_id(c1);
            // eigenvalue along the edge direction = the one orthogonal to
            // the face the endpoint lies on in the varying axis
            Rat la = eig[va].at(face_of(axis, 0));
            Rat lb = eig[vb].at(face_of(axis, 1));
            double da = to_double(la), db = to_double(lb);
            if (std::abs(da) <= 1e-8 || std::abs(db) <= 1e-8)
                throw std::runtime_error("edge orientation undefined: near-zero eigenvalue at "
                                         "edge v" + std::to_string(va) + "-v" + std::to_string(vb));
            if (da > 0 == db > 0)
                throw std::runtime_error(
                    "inconsistent orientation (same-sign endpoint eigenvalues) on edge v" +
                    std::to_string(va) + "-v" + std::to_string(vb) +
                    ": equilibrium on the open edge or non-genericity");
            Edge e;
            e.id = next_id++;
            e.axis = axis;
            e.source = da > 0 ? va : vb;
            e.target = da > 0 ? vb : va;
            std::vector<int> fa = active_faces(va, n), fb = active_faces(vb, n);
            std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(),
                                  std::back_inserter(e.faces));
            std::sort(e.faces.begin(), e.faces.end());
            g.edges.push_back(std::move(e));
        }
    }
    g.cycles = enumerate_cycles(g, 1 << n);
    return g;
}

HeteroclinicGraph build_graph(const PolymatrixGame& game) {
    return build_graph(vertex_spectrum(game), game.n_groups());
}

std::vector<std::vector<int>> enumerate_cycles(const HeteroclinicGraph& g, int max_len) {
    int nv = 1 << g.n;
    std::vector<std::vector<int>> adj(nv + 1);
    for (const auto& e : g.edges) adj[e.source].push_back(e.target);
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::set<std::vector<int>> found;
    std::vector<int> path;
    std::vector<bool> onpath(nv + 1, false);
    // DFS rooted at each vertex; only vertices >= root may appear, so each
    // cycle is produced exactly once in canonical rotation.
    auto dfs = [&](auto&& self, int root, int v) -> void {
        if (static_cast<int>(path.size()) > max_len) return;
        for (int w : adj[v]) {
            if (w == root && static_cast<int>(path.size()) >= 2) found.insert(path);
            if (w <= root || onpath[w]) continue;
            if (static_cast<int>(path.size()) == max_len) continue;
            path.push_back(w);
            onpath[w] = true;
            self(self, root, w);
            onpath[w] = false;
            path.pop_back();
        }
    };
    for (int root = 1; root <= nv; ++root) {
        path = {root};
        onpath.assign(nv + 1, false);
        onpath[root] = true;
        dfs(dfs, root, root);
    }
    return {found.begin(), found.end()};
}

std::vector<int> switching_nodes(const HeteroclinicGraph& g) {
    std::vector<int> out;
    for (int v = 1; v <= (1 << g.n); ++v)
        if (g.out_degree(v) >= 2) out.push_back(v);
    return out;
}

std::string to_dot(const HeteroclinicGraph& g) {
    std::string s = "digraph heteroclinic {\n";
    for (int v = 1; v <= (1 << g.n); ++v)
        s += "  v" + std::to_string(v) + ";\n";
    for (const auto& e : g.edges)
        s += "  v" + std::to_string(e.source) + " -> v" + std::to_string(e.target) +
             " [label=\"g" + std::to_string(e.id) + "\"];\n";
    s += "}\n";
    return s;
}

std::string cycle_name(const std::vector<int>& cycle) {
    static const std::vector<std::pair<std::vector<int>, std::string>> known = {
        {{2, 4, 8, 6}, "H1"},       {{1, 3, 4, 8, 6, 2}, "H2"}, {{1, 3, 4, 8, 6, 5}, "H3"},
        {{1, 3, 7, 8, 6, 2}, "H4"}, {{1, 3, 7, 8, 6, 5}, "H5"}, {{1, 3, 7, 5}, "H6"},
    };
    for (const auto& [seq, name] : known)
        if (seq == cycle) return name;
    return "";
}

std::vector<int> cycle_edges(const HeteroclinicGraph& g, const std::vector<int>& cycle) {
    std::vector<int> out;
    for (size_t i = 0; i < cycle.size(); ++i) {
        int a = cycle[i], b = cycle[(i + 1) % cycle.size()];
        int id = g.edge_between(a, b);
        if (id == 0)
            throw std::invalid_argument("cycle uses a non-edge v" + std::to_string(a) + "->v" +
                                        std::to_string(b));
        out.push_back(id);
    }
    return out;
}

std::vector<int> edge_sign_violations(const PolymatrixGame& game, const HeteroclinicGraph& g,
                                      int samples) {
    CubeField f = cube_field(game);
    std::vector<int> bad;
    for (const auto& e : g.edges) {
        std::vector<int> cs = vertex_coords(e.source, g.n);
        std::vector<int> ct = vertex_coords(e.target, g.n);
        bool ok = true;
        std::vector<double> p(g.n), v(g.n);
        for (int s = 1; s <= samples && ok; ++s) {
            double t = static_cast<double>(s) / (samples + 1);
            for (int a = 0; a < g.n; ++a) p[a] = cs[a] + t * (ct[a] - cs[a]);
            f.eval(p.data(), v.data());
            double tangential = v[e.axis] * (ct[e.axis] - cs[e.axis]);
            if (!(tangential > 0)) ok = false;
        }
        if (!ok) bad.push_back(e.id);
    }
    return bad;
}

} // namespace hetcycle
