#pragma once

#include "hetcycle/game.hpp"
#include "hetcycle/network.hpp"
#include "hetcycle/projective.hpp"

#include <array>
#include <string>
#include <vector>

namespace hetcycle {

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double t_end = 1e4;
    double h_init = 1e-3;
    double h_min = 1e-14;
    // dwell longer than this inside one vertex ball means the trajectory
    // is locked on the network
    double dwell_cap = 1e3;
    double dwell_radius = 0.05;
    // sample recording: keep a point after this much sup-norm movement
    double record_dx = 0.01;
    size_t max_samples = 2'000'000;
};

enum class Termination { TimeExhausted, ConvergedToPoint, BoundaryLocked };
std::string to_string(Termination t);

struct Trajectory {
    std::vector<double> t;
    std::vector<std::array<double, 3>> x;
    std::vector<std::array<double, 3>> f;  // field at the samples
    long accepted = 0, rejected = 0;
    Termination termination = Termination::TimeExhausted;
};

Trajectory integrate(const PolymatrixGame& game, const CubePoint& x0, double t_end,
                     double rel_tol = 1e-9, double abs_tol = 1e-12);
Trajectory integrate(const CubeField& field, const CubePoint& x0, const IntegratorOptions& opt);

struct Visit {
    int vertex = 0;
    double t_in = 0, t_out = 0;
    bool anomaly = false;  // not adjacent to the previous visit
};

struct Itinerary {
    std::vector<Visit> visits;
    double eps = 0;
};

// Visits recorded whenever the sup-norm distance to a vertex drops below
// eps; crossing times refined on the cubic Hermite interpolant.
Itinerary extract_itinerary(const Trajectory& traj, double eps,
                            const HeteroclinicGraph* graph = nullptr);

// Least-squares slope of log(dwell) over the periodic tail; the returned
// ratio is per full cycle of the repeating vertex pattern.
struct GrowthEstimate {
    double ratio = 0;
    int period = 0;
    int repetitions = 0;
};
GrowthEstimate transition_growth(const Itinerary& itin);

// Low-discrepancy interior seeds (Halton, bases 2/3/5).
std::vector<CubePoint> halton_seeds(int count, int skip = 1);

struct SeedOutcome {
    CubePoint seed;
    Termination termination = Termination::TimeExhausted;
    std::string observed;  // cycle name, "B1"/"B2", or "unresolved"
    double growth_ratio = 0;  // 0 when not estimable
    bool matched = false;
};

struct CrossValidation {
    RegimeRecord regime;
    std::vector<SeedOutcome> outcomes;
    double match_fraction = 0;
    std::vector<std::string> observed_set;  // distinct observed labels
};

CrossValidation cross_validate(const Rat& mu, const std::vector<CubePoint>& seeds, double eps,
                               double t_end, bool parallel = true);

std::string trajectory_csv(const Trajectory& traj);
std::string itinerary_csv(const Itinerary& itin);

} // namespace hetcycle
