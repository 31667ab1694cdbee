#pragma once

#include "hetcycle/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hetcycle {

// Skeleton character at a vertex: minus the eigenvalue orthogonal to each
// active face, zero on the other faces.
struct CharacterVector {
    int vertex = 0;
    std::vector<int> active;  // face ids, ascending
    std::vector<Rat> comp;    // size 2n, indexed by face id - 1
};

using Characters = std::vector<CharacterVector>;  // indexed by vertex id

Characters characters(const std::vector<EquilibriumRecord>& vertex_records, int n_groups);
CharacterVector character(const EquilibriumRecord& vertex_record, int n_groups);

// Open cone over an edge's active coordinate pair (u_i, u_j), i < j,
// described both as strict linear inequalities and as the reduced interval
// for the slope s = u_i / u_j.
struct SectorIneq {
    Rat ci, cj;  // ci*u_i + cj*u_j > 0, strictly
};

struct Sector {
    std::vector<SectorIneq> ineqs;  // reduced, at most two
    Rat slope_lo = 0;               // s > slope_lo (s > 0 when slope_lo == 0)
    std::optional<Rat> slope_hi;    // s < slope_hi; unbounded if absent
    bool empty = false;

    enum class Where { Inside, Boundary, Outside };
    Where locate(double slope, double tol = 1e-11) const;
    bool contains(double slope) const { return locate(slope) == Where::Inside; }
};

struct Mat2Q {
    Rat m[2][2];
    Rat trace() const { return m[0][0] + m[1][1]; }
    Rat det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

Mat2Q mat2_mul(const Mat2Q& a, const Mat2Q& b);

// Single-vertex transition map between consecutive edges, restricted to
// active coordinates, with its admissibility sector.
struct SectorMap {
    int from_edge = 0, to_edge = 0;
    Mat2Q M;
    Sector sector;
};

SectorMap branch_map(const HeteroclinicGraph& g, const Characters& chars, int edge_from,
                     int edge_to);

// All minimum-cardinality edge sets meeting every cycle, sorted; canonical
// pick is the lexicographically smallest.
std::vector<std::vector<int>> structural_sets(const HeteroclinicGraph& g);
std::vector<int> pick_canonical(const std::vector<std::vector<int>>& sets);

struct SkeletonBranch {
    int id = 0;
    std::vector<int> edges;  // S-edge, interior edges, S-edge
    int from_edge = 0, to_edge = 0;
    std::vector<int> vertices;  // visited vertices, alpha(edges[0]) first
};

// Admissible paths between S-edges with no interior S-edge. Throws (naming
// an S-avoiding cycle) when S is not structural.
std::vector<SkeletonBranch> enumerate_s_branches(const std::vector<int>& s,
                                                 const HeteroclinicGraph& g);

struct BranchData {
    Mat2Q M;
    Sector sector;
};

// Composed map and pulled-back sector along an edge path (consecutive
// edges share a vertex). The path may be closed (first == last edge).
BranchData path_data(const HeteroclinicGraph& g, const Characters& chars,
                     const std::vector<int>& edge_path);

BranchData skeleton_matrix(const HeteroclinicGraph& g, const Characters& chars,
                           const SkeletonBranch& branch);

// Concatenation of S-branches (ends must match cyclically); the matrix is
// based at the source edge of the first branch.
BranchData cycle_matrix(const HeteroclinicGraph& g, const Characters& chars,
                        const std::vector<SkeletonBranch>& all_branches,
                        const std::vector<int>& branch_ids);

// Cycle matrix straight from a vertex cycle, based at base_edge (which
// must lie on the cycle). Does not require a structural set.
BranchData cycle_matrix_from_cycle(const HeteroclinicGraph& g, const Characters& chars,
                                   const std::vector<int>& cycle, int base_edge);

enum class Verdict { Attracting, Repelling, EscapesSector, Degenerate, NotRealizable };
std::string to_string(Verdict v);

struct StabilityVerdict {
    std::string subject;
    Verdict verdict = Verdict::Degenerate;
    double lambda_max = 0, lambda_min = 0;
    std::array<double, 2> perron{0, 0};  // normalized (slope, 1) when finite
    bool in_sector = false;              // Perron vector inside the own sector
    bool boundary = false;               // an eigenvector sits on a sector boundary
    double multiplier = 0;               // |lambda_other| / lambda_in_sector
    int escapes_to = 0;                  // sibling branch id when known
};

// Perron-Frobenius style verdict for a 2x2 map on a sector. `siblings`
// (branch id, sector) resolves the escape target when provided.
StabilityVerdict eigen_verdict(const Mat2Q& M, const Sector& sector,
                               const std::vector<std::pair<int, Sector>>* siblings = nullptr);

} // namespace hetcycle
