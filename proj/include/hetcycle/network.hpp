#pragma once

#include "hetcycle/equilibria.hpp"
#include "hetcycle/game.hpp"

#include <string>
#include <vector>

namespace hetcycle {

struct Edge {
    int id = 0;       // canonical 1-based label
    int source = 0;   // vertex ids
    int target = 0;
    int axis = 0;     // coordinate varying along the edge (0-based)
    std::vector<int> faces;  // carrying faces, ascending
};

struct HeteroclinicGraph {
    int n = 0;  // groups; 2^n vertices
    std::vector<Edge> edges;                 // indexed by id-1
    std::vector<std::vector<int>> cycles;    // canonical vertex sequences

    const Edge& edge(int id) const { return edges.at(id - 1); }
    int out_degree(int vertex) const;
    // oriented edge id from a to b, 0 if none
    int edge_between(int a, int b) const;
};

// Orients every cube edge by the endpoint eigenvalues along the edge
// direction (positive at the source, negative at the target). Endpoint
// eigenvalues within 1e-8 of zero are a hard error.
HeteroclinicGraph build_graph(const std::vector<EquilibriumRecord>& spectra, int n_groups);
HeteroclinicGraph build_graph(const PolymatrixGame& game);

// All simple directed cycles up to max_len, canonicalized to start at the
// smallest vertex id and sorted lexicographically.
std::vector<std::vector<int>> enumerate_cycles(const HeteroclinicGraph& g, int max_len);

// Vertices with two or more outgoing connections.
std::vector<int> switching_nodes(const HeteroclinicGraph& g);

std::string to_dot(const HeteroclinicGraph& g);

// Cycle display name: the six cycles of the built-in family carry their
// customary names H1..H6; anything else gets C<k> in enumeration order.
std::string cycle_name(const std::vector<int>& cycle);

// Edge ids used by a cycle of vertices.
std::vector<int> cycle_edges(const HeteroclinicGraph& g, const std::vector<int>& cycle);

// Samples the tangential field component at `samples` points along each
// open edge and checks it keeps the orientation's sign (no equilibria on
// open edges). Returns offending edge ids.
std::vector<int> edge_sign_violations(const PolymatrixGame& game, const HeteroclinicGraph& g,
                                      int samples = 51);

} // namespace hetcycle
