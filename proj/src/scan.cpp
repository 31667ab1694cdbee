#include "hetcycle/scan.hpp"

#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetcycle {

namespace {

ScanRow classify_one(double mu) {
    ScanRow row;
    row.mu = mu;
    RegimeRecord r = classify_regime(Rat(mu));
    row.case_id = r.case_id;
    row.glue = r.glue;
    row.indeterminate = r.indeterminate;
    for (size_t i = 0; i < r.likely.size(); ++i)
        row.likely += (i ? "+" : "") + r.likely[i];
    return row;
}

} // namespace

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 2) throw std::invalid_argument("need at least 2 steps");
    std::vector<double> out(steps);
    for (int i = 0; i < steps; ++i) out[i] = lo + (hi - lo) * i / (steps - 1);
    return out;
}

std::vector<ScanRow> scan_regimes(const std::vector<double>& mus, bool parallel) {
    std::vector<ScanRow> rows(mus.size());
    int n = static_cast<int>(mus.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) rows[i] = classify_one(mus[i]);
    } else {
        for (int i = 0; i < n; ++i) rows[i] = classify_one(mus[i]);
    }
    return rows;
}

ScanResult scan_with_events(double mu_lo, double mu_hi, int steps, bool parallel) {
    ScanResult res;
    res.rows = scan_regimes(linspace(mu_lo, mu_hi, steps), parallel);
    res.events = detect_thresholds(mu_lo, mu_hi, std::max(steps - 1, 2));
    return res;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::string out = "mu,case,likely,glue,indeterminate\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%s,%s,%s,%d\n", r.mu, r.case_id.c_str(),
                      r.likely.c_str(), r.glue.c_str(), r.indeterminate ? 1 : 0);
        out += buf;
    }
    return out;
}

} // namespace hetcycle
