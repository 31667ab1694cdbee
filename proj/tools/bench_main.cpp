// Benchmark comparing the OpenMP kernels against the serial reference:
// regime scan over a mu grid and a batch of ODE cross-validation runs.
#include "hetcycle/scan.hpp"
#include "hetcycle/simulate.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hetcycle;
using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    int scan_points = argc > 1 ? std::atoi(argv[1]) : 96;
    int sim_seeds = argc > 2 ? std::atoi(argv[2]) : 24;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    auto mus = linspace(78.0, 108.0, scan_points);

    auto t0 = Clock::now();
    auto serial_rows = scan_regimes(mus, false);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
    auto parallel_rows = scan_regimes(mus, true);
    double t_parallel = seconds_since(t0);

    bool same = serial_rows.size() == parallel_rows.size();
    for (size_t i = 0; same && i < serial_rows.size(); ++i)
        same = serial_rows[i].case_id == parallel_rows[i].case_id &&
               serial_rows[i].likely == parallel_rows[i].likely &&
               serial_rows[i].glue == parallel_rows[i].glue;
    std::printf("scan    %4d points : serial %.3fs  parallel %.3fs  speedup %.2fx  match %s\n",
                scan_points, t_serial, t_parallel, t_serial / t_parallel, same ? "yes" : "NO");
    if (!same) return 1;

    auto seeds = halton_seeds(sim_seeds);
    t0 = Clock::now();
    auto cv_serial = cross_validate(Rat(90), seeds, 0.05, 2000.0, false);
    double s_serial = seconds_since(t0);
    t0 = Clock::now();
    auto cv_parallel = cross_validate(Rat(90), seeds, 0.05, 2000.0, true);
    double s_parallel = seconds_since(t0);
    bool sim_same = cv_serial.outcomes.size() == cv_parallel.outcomes.size();
    for (size_t i = 0; sim_same && i < cv_serial.outcomes.size(); ++i)
        sim_same = cv_serial.outcomes[i].observed == cv_parallel.outcomes[i].observed;
    std::printf("simulate %3d seeds : serial %.3fs  parallel %.3fs  speedup %.2fx  match %s\n",
                sim_seeds, s_serial, s_parallel, s_serial / s_parallel, sim_same ? "yes" : "NO");
    return sim_same ? 0 : 1;
}
