#pragma once

#include "hetcycle/projective.hpp"
#include "hetcycle/simulate.hpp"

#include <optional>

namespace hetcycle {

struct CycleInfo {
    std::vector<int> vertices;
    std::vector<int> edges;
    std::string name;
    int base_edge = 0;
    BranchData data;
    StabilityVerdict verdict;
};

// Full per-game pipeline: equilibria, network, dual skeleton over the
// canonical structural set, projective map, regime.
struct MuAnalysis {
    std::optional<Rat> mu;  // set when the game is the built-in family
    PolymatrixGame game;
    std::vector<EquilibriumRecord> vertices;
    std::vector<EquilibriumRecord> faces;
    std::optional<EquilibriumRecord> interior;
    HeteroclinicGraph graph;
    Characters chars;
    std::vector<std::vector<int>> min_structural_sets;
    std::vector<int> s_edges;
    std::vector<SkeletonBranch> branches;
    std::vector<BranchData> branch_data;
    std::vector<StabilityVerdict> branch_verdicts;
    std::vector<CycleInfo> cycles;
    ProjectiveMap pmap;
    std::vector<ProjectivePoint> fixed_pts;
    std::vector<ProjectivePoint> periodic_pts;
    RegimeRecord regime;
    std::vector<int> edge_sign_issues;
};

MuAnalysis analyze(const PolymatrixGame& game, std::optional<Rat> mu = std::nullopt,
                   int max_period = 4, std::vector<int> s_override = {});

inline MuAnalysis analyze_family(const Rat& mu, int max_period = 4,
                                 std::vector<int> s_override = {}) {
    return analyze(build_mu_family(mu), mu, max_period, std::move(s_override));
}

} // namespace hetcycle
