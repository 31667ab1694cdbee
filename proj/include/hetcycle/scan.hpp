#pragma once

#include "hetcycle/analysis.hpp"

#include <vector>

namespace hetcycle {

struct ScanRow {
    double mu = 0;
    std::string case_id;
    std::string likely;
    std::string glue;
    bool indeterminate = false;
};

// Per-mu regime classification over a grid. The OpenMP kernel and the
// serial reference produce identical rows; the benchmark target compares
// them.
std::vector<ScanRow> scan_regimes(const std::vector<double>& mus, bool parallel);

std::vector<double> linspace(double lo, double hi, int steps);

struct ScanResult {
    std::vector<ScanRow> rows;
    std::vector<BifurcationEvent> events;
};

// Grid scan plus event refinement (sector crossings, transcritical, Hopf).
ScanResult scan_with_events(double mu_lo, double mu_hi, int steps, bool parallel);

std::string scan_csv(const std::vector<ScanRow>& rows);

} // namespace hetcycle
