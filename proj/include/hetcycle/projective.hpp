#pragma once

#include "hetcycle/dual_skeleton.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hetcycle {

// One Mobius piece of the interval map: phi(x) = (a x + b) / (c x + d) on
// the open sub-interval (lo, hi) of [src_slot, src_slot + 1].
struct MobiusBranch {
    int branch_id = 0;
    int src_slot = 0, dst_slot = 0;  // S-edge slots (0-based)
    Rat lo, hi;
    Rat a, b, c, d;

    double eval(double x) const;
    double deriv(double x) const;
};

struct ProjectiveMap {
    std::vector<int> s_edges;           // ascending edge ids; slot k -> [k, k+1]
    std::vector<MobiusBranch> pieces;   // ordered by lo
    std::vector<std::string> warnings;  // branches whose sector misses the simplex

    int slots() const { return static_cast<int>(s_edges.size()); }
    const MobiusBranch* piece_at(double x, double breakpoint_tol = 1e-12) const;
};

ProjectiveMap build_projective_map(const HeteroclinicGraph& g, const Characters& chars,
                                   const std::vector<int>& s_edges,
                                   const std::vector<SkeletonBranch>& branches);

// Evaluation rejects breakpoints and points outside [0, #S].
struct EvalResult {
    double y = 0;
    int branch_id = 0;
};
EvalResult evaluate(const ProjectiveMap& map, double x);
double derivative(const ProjectiveMap& map, double x);

struct ProjectivePoint {
    double x = 0;
    int period = 1;
    std::vector<int> itinerary;  // branch ids visited
    double multiplier = 0;       // product of |phi'| over the orbit
    enum class Stability { Attracting, Repelling, Neutral } verdict = Stability::Neutral;
};

std::string to_string(ProjectivePoint::Stability s);

// Interior fixed points, one Mobius quadratic per same-edge branch.
std::vector<ProjectivePoint> fixed_points(const ProjectiveMap& map);

// Periodic orbits up to max_period via admissible branch itineraries;
// composition of Mobius maps is Mobius.
std::vector<ProjectivePoint> periodic_points(const ProjectiveMap& map, int max_period);

struct RegimeRecord {
    std::string case_id;               // "a".."e", or "indeterminate"
    std::vector<std::string> likely;   // cycle names or {"B1","B2"}
    std::string glue;                  // cycle carrying the invariant manifold
    bool indeterminate = false;
    std::string note;
    double mu = 0;
};

RegimeRecord classify_regime(const Rat& mu, int max_period = 4);

// Sector-crossing thresholds of the mu-family inside [mu_lo, mu_hi]
// (cycle-verdict category changes located by bisection), plus
// transcritical and Hopf crossings when bracketed. Tolerance 1e-8 on mu.
std::vector<BifurcationEvent> detect_thresholds(double mu_lo, double mu_hi, int grid = 64);

} // namespace hetcycle
