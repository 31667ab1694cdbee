#include "hetcycle/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetcycle {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::TimeExhausted: return "time-exhausted";
        case Termination::ConvergedToPoint: return "converged-to-point";
        case Termination::BoundaryLocked: return "boundary-locked";
    }
    return "?";
}

namespace {

// Dormand-Prince 4(5) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

using V3 = std::array<double, 3>;

inline double sup_dist_to_vertex(const V3& x, int vid) {
    double d = 0;
    int v = vid - 1;
    for (int a = 0; a < 3; ++a) {
        double vc = (v >> (2 - a)) & 1;
        d = std::max(d, std::abs(x[a] - vc));
    }
    return d;
}

inline int nearest_vertex(const V3& x, double* dist) {
    int best = 1;
    double bd = 1e300;
    for (int vid = 1; vid <= 8; ++vid) {
        double d = sup_dist_to_vertex(x, vid);
        if (d < bd) {
            bd = d;
            best = vid;
        }
    }
    if (dist) *dist = bd;
    return best;
}

} // namespace

Trajectory integrate(const PolymatrixGame& game, const CubePoint& x0, double t_end,
                     double rel_tol, double abs_tol) {
    IntegratorOptions opt;
    opt.t_end = t_end;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    return integrate(cube_field(game), x0, opt);
}

namespace {

// The integrator works on the logit chart a_i = log(x_i / (1 - x_i)),
// where the replicator field is simply da_i/dt = g_i(x). Face distances
// become ordinary magnitudes of a, so trajectories hugging the invariant
// faces never collapse onto them through rounding. Coordinates starting
// exactly on a face are frozen there (faces are flow-invariant).
struct LogitSystem {
    const CubeField* field;
    std::array<bool, 3> frozen{};
    V3 frozen_val{};

    V3 to_cube(const V3& a) const {
        V3 x;
        for (int i = 0; i < 3; ++i)
            x[i] = frozen[i] ? frozen_val[i] : 1.0 / (1.0 + std::exp(-a[i]));
        return x;
    }
    void rhs(const V3& a, V3& da) const {
        V3 x = to_cube(a);
        for (int i = 0; i < 3; ++i) {
            if (frozen[i]) {
                da[i] = 0;
                continue;
            }
            double g = field->intercept_d[i];
            for (int b = 0; b < 3; ++b) g += field->coef_d[3 * i + b] * x[b];
            da[i] = g;
        }
    }
    // dx/dt = sigma'(a) da/dt, with sigma' evaluated in a form that does
    // not lose the e^-|a| tail to the saturation of sigma itself
    V3 cube_velocity(const V3& a) const {
        V3 da;
        rhs(a, da);
        V3 v;
        for (int i = 0; i < 3; ++i) {
            if (frozen[i]) {
                v[i] = 0;
                continue;
            }
            double e = std::exp(-std::abs(a[i]));
            double sp = e / ((1.0 + e) * (1.0 + e));
            v[i] = sp * da[i];
        }
        return v;
    }
    bool all_frozen() const { return frozen[0] && frozen[1] && frozen[2]; }
};

} // namespace

Trajectory integrate(const CubeField& field, const CubePoint& x0, const IntegratorOptions& opt) {
    if (field.n != 3) throw std::invalid_argument("integrator expects a 3-group game");
    if (x0.coords.size() != 3) throw std::invalid_argument("seed dimension mismatch");
    for (double c : x0.coords)
        if (c < 0.0 || c > 1.0) throw std::invalid_argument("seed outside the cube");

    LogitSystem sys{&field, {}, {}};
    V3 a{};
    for (int i = 0; i < 3; ++i) {
        double c = x0.coords[i];
        if (c <= 0.0 || c >= 1.0) {
            sys.frozen[i] = true;
            sys.frozen_val[i] = c;
            a[i] = 0;
        } else {
            a[i] = std::log(c / (1.0 - c));
        }
    }

    Trajectory traj;
    V3 k1;
    sys.rhs(a, k1);
    double t = 0;
    V3 xc = sys.to_cube(a);
    traj.t.push_back(t);
    traj.x.push_back(xc);
    traj.f.push_back(sys.cube_velocity(a));
    if (sys.all_frozen()) {
        // a vertex is an equilibrium; nothing to integrate
        traj.termination = Termination::ConvergedToPoint;
        return traj;
    }

    double h = opt.h_init;
    const double h_max = 2.0;
    double err_prev = 1.0;
    V3 last_rec = xc;
    int dwell_vertex = 0;
    double dwell_start = 0;

    auto record = [&](double tt, const V3& aa, bool force) {
        V3 yy = sys.to_cube(aa);
        double move = 0;
        for (int i = 0; i < 3; ++i) move = std::max(move, std::abs(yy[i] - last_rec[i]));
        if (!force && move < opt.record_dx) return;
        if (traj.t.size() >= opt.max_samples) return;
        for (double& c : yy) c = std::clamp(c, 0.0, 1.0);
        traj.t.push_back(tt);
        traj.x.push_back(yy);
        traj.f.push_back(sys.cube_velocity(aa));
        last_rec = yy;
    };

    V3 k2, k3, k4, k5, k6, k7, ytmp, ynew, errv;
    while (t < opt.t_end) {
        h = std::min(h, opt.t_end - t);
        for (int i = 0; i < 3; ++i) ytmp[i] = a[i] + h * A21 * k1[i];
        sys.rhs(ytmp, k2);
        for (int i = 0; i < 3; ++i) ytmp[i] = a[i] + h * (A31 * k1[i] + A32 * k2[i]);
        sys.rhs(ytmp, k3);
        for (int i = 0; i < 3; ++i) ytmp[i] = a[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        sys.rhs(ytmp, k4);
        for (int i = 0; i < 3; ++i)
            ytmp[i] = a[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        sys.rhs(ytmp, k5);
        for (int i = 0; i < 3; ++i)
            ytmp[i] =
                a[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        sys.rhs(ytmp, k6);
        for (int i = 0; i < 3; ++i)
            ynew[i] =
                a[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        sys.rhs(ynew, k7);
        double err = 0;
        for (int i = 0; i < 3; ++i) {
            errv[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                           E7 * k7[i]);
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(a[i]), std::abs(ynew[i]));
            // in the logit chart an absolute error d on a is a relative
            // error d on the face distance; hold it to rel_tol as well
            sc = std::max(sc, opt.rel_tol);
            double r = errv[i] / sc;
            err += r * r;
        }
        err = std::sqrt(err / 3.0);
        if (err <= 1.0) {
            t += h;
            a = ynew;
            k1 = k7;  // FSAL
            ++traj.accepted;
            record(t, a, false);
            V3 y = sys.to_cube(a);
            double dist = 0;
            int vid = nearest_vertex(y, &dist);
            if (dist < opt.dwell_radius) {
                if (vid != dwell_vertex) {
                    dwell_vertex = vid;
                    dwell_start = t;
                } else if (t - dwell_start > opt.dwell_cap) {
                    traj.termination = Termination::BoundaryLocked;
                    record(t, a, true);
                    return traj;
                }
            } else {
                dwell_vertex = 0;
            }
            V3 v = sys.cube_velocity(a);
            double speed = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
            // tiny velocity near a saddle vertex is normal passage, not
            // convergence; away from vertices it means an equilibrium
            if (speed < 1e-13 && dist > opt.dwell_radius) {
                traj.termination = Termination::ConvergedToPoint;
                record(t, a, true);
                return traj;
            }
        } else {
            ++traj.rejected;
        }
        double e = std::max(err, 1e-10);
        double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
        fac = std::clamp(fac, 0.2, 5.0);
        h = std::min(h * fac, h_max);
        if (err <= 1.0) err_prev = e;
        if (h < opt.h_min) {
            traj.termination = Termination::BoundaryLocked;
            record(t, a, true);
            return traj;
        }
    }
    traj.termination = Termination::TimeExhausted;
    record(t, a, true);
    return traj;
}

namespace {

// cubic Hermite interpolation between consecutive samples
V3 hermite(const Trajectory& tr, size_t i, double tt) {
    double t0 = tr.t[i], t1 = tr.t[i + 1];
    double dt = t1 - t0;
    double s = (tt - t0) / dt;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    double h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s);
    double h11 = s * s * (s - 1);
    V3 out;
    for (int a = 0; a < 3; ++a)
        out[a] = h00 * tr.x[i][a] + h10 * dt * tr.f[i][a] + h01 * tr.x[i + 1][a] +
                 h11 * dt * tr.f[i + 1][a];
    return out;
}

} // namespace

Itinerary extract_itinerary(const Trajectory& traj, double eps, const HeteroclinicGraph* graph) {
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 0.5)");
    Itinerary itin;
    itin.eps = eps;
    if (traj.t.size() < 2) return itin;

    auto inside_of = [&](const V3& x) {
        double d = 0;
        int vid = nearest_vertex(x, &d);
        return d < eps ? vid : 0;
    };
    // refine the boundary crossing on the Hermite interpolant
    auto refine = [&](size_t i, int target, bool entering) {
        double lo = traj.t[i], hi = traj.t[i + 1];
        for (int it = 0; it < 60 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            bool in = sup_dist_to_vertex(hermite(traj, i, mid), target) < eps;
            if (in == entering)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    int cur = inside_of(traj.x[0]);
    double t_in = traj.t[0];
    for (size_t i = 0; i + 1 < traj.t.size(); ++i) {
        int nxt = inside_of(traj.x[i + 1]);
        if (nxt == cur) continue;
        if (cur != 0) {
            double t_exit = refine(i, cur, false);
            itin.visits.push_back({cur, t_in, t_exit, false});
        }
        if (nxt != 0) t_in = refine(i, nxt, true);
        cur = nxt;
    }
    if (cur != 0) itin.visits.push_back({cur, t_in, traj.t.back(), false});

    // merge re-entries of the same vertex separated by a tiny excursion
    std::vector<Visit> merged;
    for (const auto& v : itin.visits) {
        if (!merged.empty() && merged.back().vertex == v.vertex &&
            v.t_in - merged.back().t_out < 1e-9)
            merged.back().t_out = v.t_out;
        else
            merged.push_back(v);
    }
    itin.visits = std::move(merged);
    if (graph) {
        for (size_t i = 1; i < itin.visits.size(); ++i)
            if (graph->edge_between(itin.visits[i - 1].vertex, itin.visits[i].vertex) == 0)
                itin.visits[i].anomaly = true;
    }
    return itin;
}

GrowthEstimate transition_growth(const Itinerary& itin) {
    const auto& vs = itin.visits;
    size_t n = vs.size();
    // eventual period of the vertex pattern, smallest first
    for (int p = 1; p <= 8; ++p) {
        if (n < static_cast<size_t>(6 * p)) break;
        size_t tail = 6 * static_cast<size_t>(p);
        // use the longest p-periodic suffix, at least 6 repetitions
        size_t start = n - tail;
        while (start > 0 && vs[start - 1].vertex == vs[start - 1 + p].vertex) --start;
        bool periodic = true;
        for (size_t i = start; i + p < n; ++i)
            if (vs[i].vertex != vs[i + p].vertex) periodic = false;
        if (!periodic) continue;
        // least squares of log dwell vs index over the suffix
        size_t m = n - start;
        if (m < static_cast<size_t>(6 * p)) continue;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t cnt = 0;
        for (size_t i = start; i < n; ++i) {
            double dwell = vs[i].t_out - vs[i].t_in;
            if (!(dwell > 0)) continue;
            double xi = static_cast<double>(i);
            double yi = std::log(dwell);
            sx += xi;
            sy += yi;
            sxx += xi * xi;
            sxy += xi * yi;
            ++cnt;
        }
        if (cnt < static_cast<size_t>(6 * p)) continue;
        double denom = cnt * sxx - sx * sx;
        if (denom == 0) continue;
        double slope = (cnt * sxy - sx * sy) / denom;
        GrowthEstimate ge;
        ge.period = p;
        ge.repetitions = static_cast<int>(m / p);
        ge.ratio = std::exp(slope * p);
        return ge;
    }
    throw std::runtime_error("insufficient repetitions to estimate dwell growth");
}

std::vector<CubePoint> halton_seeds(int count, int skip) {
    auto radical_inverse = [](int base, int i) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * (i % base);
            i /= base;
        }
        return r;
    };
    std::vector<CubePoint> out;
    for (int i = skip; i < skip + count; ++i)
        out.push_back(CubePoint{{radical_inverse(2, i), radical_inverse(3, i),
                                 radical_inverse(5, i)}});
    return out;
}

namespace {

// repeating vertex pattern at the tail of an itinerary, canonicalized to
// start at the smallest vertex
std::vector<int> tail_cycle(const Itinerary& itin) {
    const auto& vs = itin.visits;
    size_t n = vs.size();
    for (int p = 2; p <= 8; ++p) {
        if (n < static_cast<size_t>(2 * p) + 1) break;
        bool periodic = true;
        for (size_t i = n - 2 * p; i + p < n; ++i)
            if (vs[i].vertex != vs[i + p].vertex) periodic = false;
        if (!periodic) continue;
        std::vector<int> cyc(p);
        for (int k = 0; k < p; ++k) cyc[k] = vs[n - p + k].vertex;
        auto mn = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), mn, cyc.end());
        // all distinct
        std::set<int> uniq(cyc.begin(), cyc.end());
        if (static_cast<int>(uniq.size()) != p) continue;
        return cyc;
    }
    return {};
}

} // namespace

CrossValidation cross_validate(const Rat& mu, const std::vector<CubePoint>& seeds, double eps,
                               double t_end, bool parallel) {
    CrossValidation cv;
    cv.regime = classify_regime(mu);
    PolymatrixGame game = build_mu_family(mu);
    CubeField field = cube_field(game);
    HeteroclinicGraph graph = build_graph(game);
    auto faces = face_equilibria(game);

    IntegratorOptions opt;
    opt.t_end = t_end;
    cv.outcomes.resize(seeds.size());

    auto run_seed = [&](int i) {
        SeedOutcome& oc = cv.outcomes[i];
        oc.seed = seeds[i];
        Trajectory traj = integrate(field, seeds[i], opt);
        oc.termination = traj.termination;
        // near a face equilibrium?
        const auto& xf = traj.x.back();
        for (size_t b = 0; b < faces.size(); ++b) {
            double d2 = 0;
            for (int a = 0; a < 3; ++a) {
                double e = xf[a] - faces[b].x[a];
                d2 += e * e;
            }
            if (std::sqrt(d2) < 1e-3) oc.observed = "B" + std::to_string(b + 1);
        }
        if (oc.observed.empty()) {
            Itinerary itin = extract_itinerary(traj, eps, &graph);
            std::vector<int> cyc = tail_cycle(itin);
            if (!cyc.empty()) {
                std::string name = cycle_name(cyc);
                oc.observed = name.empty() ? "unresolved" : name;
                try {
                    oc.growth_ratio = transition_growth(itin).ratio;
                } catch (const std::exception&) {
                    oc.growth_ratio = 0;
                }
            } else {
                oc.observed = "unresolved";
            }
        }
        oc.matched = std::find(cv.regime.likely.begin(), cv.regime.likely.end(), oc.observed) !=
                     cv.regime.likely.end();
    };

    int n = static_cast<int>(seeds.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) run_seed(i);
    } else {
        for (int i = 0; i < n; ++i) run_seed(i);
    }

    int matched = 0;
    std::set<std::string> observed;
    for (const auto& oc : cv.outcomes) {
        if (oc.matched) ++matched;
        observed.insert(oc.observed);
    }
    cv.match_fraction = seeds.empty() ? 0.0 : static_cast<double>(matched) / seeds.size();
    cv.observed_set.assign(observed.begin(), observed.end());
    return cv;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,x,y,z\n";
    char buf[160];
    for (size_t i = 0; i < traj.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.t[i], traj.x[i][0],
                      traj.x[i][1], traj.x[i][2]);
        out += buf;
    }
    return out;
}

std::string itinerary_csv(const Itinerary& itin) {
    std::string out = "vertex,t_in,t_out\n";
    char buf[128];
    for (const auto& v : itin.visits) {
        std::snprintf(buf, sizeof buf, "v%d,%.17g,%.17g\n", v.vertex, v.t_in, v.t_out);
        out += buf;
    }
    return out;
}

} // namespace hetcycle
