#include "hetcycle/equilibria.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hetcycle {

std::string to_string(EqKind k) {
    switch (k) {
        case EqKind::Vertex: return "vertex";
        case EqKind::FaceInterior: return "face-interior";
        case EqKind::Interior: return "interior";
    }
    return "?";
}

std::string to_string(EqClass c) {
    switch (c) {
        case EqClass::Sink: return "sink";
        case EqClass::Source: return "source";
        case EqClass::Saddle: return "saddle";
        case EqClass::SaddleFocus12: return "saddle-focus(1,2)";
        case EqClass::SaddleFocus21: return "saddle-focus(2,1)";
        case EqClass::NonHyperbolic: return "non-hyperbolic";
    }
    return "?";
}

std::string to_string(BifurcationEvent::Kind k) {
    switch (k) {
        case BifurcationEvent::Kind::Transcritical: return "transcritical";
        case BifurcationEvent::Kind::Hopf: return "hopf";
        case BifurcationEvent::Kind::SectorCrossing: return "sector-crossing";
    }
    return "?";
}

Mat3 jacobian(const PolymatrixGame& game, const CubePoint& p) {
    CubeField f = cube_field(game);
    if (f.n != 3) throw std::invalid_argument("jacobian expects a 3-group game");
    const auto& c = p.coords;
    Mat3 j{};
    for (int i = 0; i < 3; ++i) {
        double g = f.intercept_d[i];
        for (int b = 0; b < 3; ++b) g += f.coef_d[3 * i + b] * c[b];
        for (int b = 0; b < 3; ++b) {
            j[i][b] = c[i] * (1.0 - c[i]) * f.coef_d[3 * i + b];
            if (b == i) j[i][b] += (1.0 - 2.0 * c[i]) * g;
        }
    }
    return j;
}

std::vector<std::vector<Rat>> jacobian(const PolymatrixGame& game, const CubePointQ& p) {
    CubeField f = cube_field(game);
    int n = f.n;
    const auto& c = p.coords;
    std::vector<std::vector<Rat>> j(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i) {
        Rat g = f.intercept[i];
        for (int b = 0; b < n; ++b) g += f.coef[i][b] * c[b];
        for (int b = 0; b < n; ++b) {
            j[i][b] = c[i] * (Rat(1) - c[i]) * f.coef[i][b];
            if (b == i) j[i][b] += (Rat(1) - 2 * c[i]) * g;
        }
    }
    return j;
}

std::array<std::complex<double>, 3> cubic_eigenvalues_qr(const Mat3& m) {
    Eigen::Matrix3d em;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) em(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::Matrix3d> es(em, false);
    std::array<std::complex<double>, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = es.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

std::array<std::complex<double>, 3> cubic_eigenvalues(const Mat3& m) {
    // characteristic polynomial l^3 - tr l^2 + s2 l - det
    double tr = m[0][0] + m[1][1] + m[2][2];
    double s2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // depressed cubic t^3 + p t + q with l = t + tr/3
    double sh = tr / 3.0;
    double p = s2 - tr * tr / 3.0;
    double q = -det + s2 * sh - 2.0 * sh * sh * sh;
    double half_q = q / 2.0, third_p = p / 3.0;
    double disc = half_q * half_q + third_p * third_p * third_p;
    double scale = std::max({1.0, std::abs(p), std::abs(q)});
    std::array<std::complex<double>, 3> out;
    if (disc > 1e-14 * scale * scale) {
        double r = std::sqrt(disc);
        double u = std::cbrt(-half_q + r);
        double v = std::cbrt(-half_q - r);
        double real_root = u + v;
        double re = -real_root / 2.0;
        double im = std::sqrt(3.0) / 2.0 * (u - v);
        out = {std::complex<double>(real_root + sh, 0.0),
               std::complex<double>(re + sh, std::abs(im)),
               std::complex<double>(re + sh, -std::abs(im))};
    } else if (disc < -1e-14 * scale * scale) {
        double rho = std::sqrt(-third_p * third_p * third_p);
        double theta = std::acos(std::clamp(-half_q / rho, -1.0, 1.0));
        double mag = 2.0 * std::sqrt(-third_p);
        for (int k = 0; k < 3; ++k)
            out[k] = std::complex<double>(mag * std::cos((theta + 2.0 * M_PI * k) / 3.0) + sh, 0.0);
    } else {
        // borderline: repeated roots
        double u = std::cbrt(-half_q);
        out = {std::complex<double>(2.0 * u + sh, 0.0), std::complex<double>(-u + sh, 0.0),
               std::complex<double>(-u + sh, 0.0)};
    }
    // residual check against the closed form; QR rescue on drift
    auto poly = [&](std::complex<double> l) {
        return ((l - tr) * l + s2) * l - det;
    };
    double resid = 0;
    for (auto l : out) resid = std::max(resid, std::abs(poly(l)));
    double mscale = 1.0;
    for (auto& row : m)
        for (double e : row) mscale = std::max(mscale, std::abs(e));
    if (resid > 1e-7 * mscale * mscale * mscale) return cubic_eigenvalues_qr(m);
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

EqClass classify_spectrum(const std::array<std::complex<double>, 3>& ev, double tol) {
    int pos = 0, neg = 0;
    bool complex_pair = false;
    double pair_re = 0;
    double real_re = 0;
    for (const auto& l : ev) {
        if (std::abs(l.real()) <= tol) return EqClass::NonHyperbolic;
        if (std::abs(l.imag()) > 1e-10) {
            complex_pair = true;
            pair_re = l.real();
        } else {
            real_re = l.real();
        }
        (l.real() > 0 ? pos : neg)++;
    }
    if (pos == 3) return EqClass::Source;
    if (neg == 3) return EqClass::Sink;
    if (complex_pair) {
        if (pair_re > 0 && real_re < 0) return EqClass::SaddleFocus12;
        if (pair_re < 0 && real_re > 0) return EqClass::SaddleFocus21;
    }
    return EqClass::Saddle;
}

std::vector<EquilibriumRecord> vertex_spectrum(const PolymatrixGame& game) {
    CubeField f = cube_field(game);
    int n = f.n;
    std::vector<EquilibriumRecord> out;
    for (int id = 1; id <= (1 << n); ++id) {
        std::vector<int> vc = vertex_coords(id, n);
        EquilibriumRecord r;
        r.kind = EqKind::Vertex;
        r.index = id;
        r.x.assign(vc.begin(), vc.end());
        r.x_exact.assign(vc.begin(), vc.end());
        std::vector<std::complex<double>> evs;
        for (int a = 0; a < n; ++a) {
            Rat g = f.intercept[a];
            for (int b = 0; b < n; ++b) g += f.coef[a][b] * Rat(vc[b]);
            Rat lambda = (vc[a] == 1) ? Rat(-g) : g;
            r.face_eigs.emplace_back(face_of(a, vc[a]), lambda);
            evs.emplace_back(to_double(lambda), 0.0);
        }
        if (n == 3)
            for (int i = 0; i < 3; ++i) r.eigenvalues[i] = evs[i];
        std::array<std::complex<double>, 3> sorted = r.eigenvalues;
        if (n == 3) {
            std::sort(sorted.begin(), sorted.end(),
                      [](auto a, auto b) { return a.real() < b.real(); });
            r.eigenvalues = sorted;
            r.cls = classify_spectrum(sorted);
        } else {
            int pos = 0, neg = 0;
            bool nh = false;
            for (auto& [fc, lq] : r.face_eigs) {
                (void)fc;
                double l = to_double(lq);
                if (std::abs(l) <= kHyperbolicTol) nh = true;
                (l > 0 ? pos : neg)++;
            }
            r.cls = nh                  ? EqClass::NonHyperbolic
                    : pos == n          ? EqClass::Source
                    : neg == n          ? EqClass::Sink
                                        : EqClass::Saddle;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> a,
                                               std::vector<Rat> b) {
    size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat factor = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

namespace {

// Damped Newton on the cube velocity field; returns true on |step| < 1e-13.
bool newton_field(const CubeField& f, std::vector<double>& c, int max_iters = 60) {
    int n = f.n;
    auto vel = [&](const std::vector<double>& y) {
        std::vector<double> v(n);
        f.eval(y.data(), v.data());
        return v;
    };
    auto norm = [](const std::vector<double>& v) {
        double s = 0;
        for (double e : v) s += e * e;
        return std::sqrt(s);
    };
    std::vector<double> v = vel(c);
    for (int it = 0; it < max_iters; ++it) {
        // Jacobian of the velocity
        std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            double g = f.intercept_d[i];
            for (int b = 0; b < n; ++b) g += f.coef_d[n * i + b] * c[b];
            for (int b = 0; b < n; ++b) {
                J[i][b] = c[i] * (1.0 - c[i]) * f.coef_d[n * i + b];
                if (b == i) J[i][b] += (1.0 - 2.0 * c[i]) * g;
            }
        }
        // solve J dx = -v (partial pivoting)
        std::vector<double> dx(v);
        for (double& e : dx) e = -e;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(J[r][col]) > std::abs(J[piv][col])) piv = r;
            if (std::abs(J[piv][col]) < 1e-14) return false;
            std::swap(J[piv], J[col]);
            std::swap(dx[piv], dx[col]);
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                double fac = J[r][col] / J[col][col];
                for (int cc = col; cc < n; ++cc) J[r][cc] -= fac * J[col][cc];
                dx[r] -= fac * dx[col];
            }
        }
        for (int i = 0; i < n; ++i) dx[i] /= J[i][i];
        double step = norm(dx);
        double damp = 1.0;
        double v0 = norm(v);
        std::vector<double> trial(n);
        for (int half = 0; half < 30; ++half) {
            for (int i = 0; i < n; ++i) trial[i] = c[i] + damp * dx[i];
            if (norm(vel(trial)) <= v0 || v0 < 1e-300) break;
            damp *= 0.5;
        }
        c = trial;
        v = vel(c);
        if (step * damp < 1e-13) return true;
    }
    return false;
}

EquilibriumRecord make_record(const PolymatrixGame& game, std::vector<double> x,
                              std::vector<Rat> x_exact, EqKind kind, int index) {
    EquilibriumRecord r;
    r.kind = kind;
    r.index = index;
    r.x = std::move(x);
    r.x_exact = std::move(x_exact);
    Mat3 J = jacobian(game, CubePoint{r.x});
    r.eigenvalues = cubic_eigenvalues(J);
    r.cls = classify_spectrum(r.eigenvalues);
    return r;
}

} // namespace

std::vector<EquilibriumRecord> face_equilibria(const PolymatrixGame& game,
                                               std::vector<std::string>* warnings) {
    CubeField f = cube_field(game);
    if (f.n != 3) throw std::invalid_argument("face_equilibria expects a 3-group game");
    std::vector<EquilibriumRecord> out;
    for (int axis = 0; axis < 3; ++axis) {
        for (int val : {1, 0}) {
            int face = face_of(axis, val);
            int i = (axis + 1) % 3, j = (axis + 2) % 3;
            if (i > j) std::swap(i, j);
            // Newton from a coarse grid on the open face
            std::vector<std::array<double, 2>> hits;
            for (int gi = 1; gi <= 9; ++gi) {
                for (int gj = 1; gj <= 9; ++gj) {
                    std::vector<double> c(3);
                    c[axis] = val;
                    c[i] = gi / 10.0;
                    c[j] = gj / 10.0;
                    // restricted 2D newton: the affine part must vanish in-face
                    std::vector<double> y = c;
                    bool ok = true;
                    for (int it = 0; it < 60 && ok; ++it) {
                        double gi_v = f.intercept_d[i], gj_v = f.intercept_d[j];
                        for (int b = 0; b < 3; ++b) {
                            gi_v += f.coef_d[3 * i + b] * y[b];
                            gj_v += f.coef_d[3 * j + b] * y[b];
                        }
                        double a11 = f.coef_d[3 * i + i], a12 = f.coef_d[3 * i + j];
                        double a21 = f.coef_d[3 * j + i], a22 = f.coef_d[3 * j + j];
                        double det = a11 * a22 - a12 * a21;
                        if (std::abs(det) < 1e-14) {
                            ok = false;
                            break;
                        }
                        double di = (-gi_v * a22 + gj_v * a12) / det;
                        double dj = (-a11 * gj_v + a21 * gi_v) / det;
                        y[i] += di;
                        y[j] += dj;
                        if (std::hypot(di, dj) < 1e-13) break;
                        if (it == 59 && warnings)
                            warnings->push_back("face " + std::to_string(face) +
                                                ": newton cell did not converge");
                    }
                    if (!ok) continue;
                    if (y[i] > 1e-9 && y[i] < 1.0 - 1e-9 && y[j] > 1e-9 && y[j] < 1.0 - 1e-9)
                        hits.push_back({y[i], y[j]});
                }
            }
            // dedupe
            std::vector<std::array<double, 2>> uniq;
            for (auto& h : hits) {
                bool dup = false;
                for (auto& u : uniq)
                    if (std::abs(u[0] - h[0]) < 1e-7 && std::abs(u[1] - h[1]) < 1e-7) dup = true;
                if (!dup) uniq.push_back(h);
            }
            for (auto& u : uniq) {
                // exact polish: solve the in-face affine system in rationals
                std::vector<std::vector<Rat>> A{{f.coef[i][i], f.coef[i][j]},
                                                {f.coef[j][i], f.coef[j][j]}};
                std::vector<Rat> b{-(f.intercept[i] + f.coef[i][axis] * Rat(val)),
                                   -(f.intercept[j] + f.coef[j][axis] * Rat(val))};
                std::vector<Rat> xe(3);
                std::vector<double> xd(3);
                xd[axis] = val;
                xe[axis] = val;
                if (auto sol = solve_rational(A, b)) {
                    xe[i] = (*sol)[0];
                    xe[j] = (*sol)[1];
                    xd[i] = to_double(xe[i]);
                    xd[j] = to_double(xe[j]);
                    if (!(xe[i] > 0 && xe[i] < 1 && xe[j] > 0 && xe[j] < 1)) continue;
                } else {
                    xd[i] = u[0];
                    xd[j] = u[1];
                    xe.clear();
                }
                out.push_back(make_record(game, xd, xe, EqKind::FaceInterior, face));
            }
        }
    }
    return out;
}

std::optional<EquilibriumRecord> interior_equilibrium(const PolymatrixGame& game) {
    CubeField f = cube_field(game);
    int n = f.n;
    std::vector<std::vector<double>> starts;
    starts.push_back(std::vector<double>(n, 0.5));
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b)
            for (int c = 1; c <= 5; ++c)
                starts.push_back({a / 6.0, b / 6.0, c / 6.0});
    for (auto& s : starts) {
        std::vector<double> y = s;
        if (!newton_field(f, y)) continue;
        bool interior = true;
        for (double e : y)
            if (!(e > 1e-9 && e < 1.0 - 1e-9)) interior = false;
        if (!interior) continue;
        // exact polish: interior zeros solve the affine system g = 0
        std::vector<Rat> xe;
        std::vector<double> xd = y;
        std::vector<Rat> b(n);
        for (int i = 0; i < n; ++i) b[i] = -f.intercept[i];
        if (auto sol = solve_rational(f.coef, b)) {
            bool inside = true;
            for (const Rat& e : *sol)
                if (!(e > 0 && e < 1)) inside = false;
            if (inside) {
                xe = *sol;
                for (int i = 0; i < n; ++i) xd[i] = to_double(xe[i]);
            }
        }
        return make_record(game, xd, xe, EqKind::Interior, 0);
    }
    return std::nullopt;
}

std::vector<EquilibriumRecord> all_equilibria(const PolymatrixGame& game, int grid) {
    CubeField f = cube_field(game);
    int n = f.n;
    std::vector<std::vector<double>> zeros;
    std::vector<double> y(n);
    std::vector<int> idx(n, 0);
    auto next = [&]() {
        for (int a = 0; a < n; ++a) {
            if (++idx[a] <= grid) return true;
            idx[a] = 0;
        }
        return false;
    };
    do {
        for (int a = 0; a < n; ++a) y[a] = static_cast<double>(idx[a]) / grid;
        std::vector<double> c = y;
        if (!newton_field(f, c)) continue;
        bool in_cube = true;
        for (double e : c)
            if (e < -1e-9 || e > 1.0 + 1e-9) in_cube = false;
        if (!in_cube) continue;
        for (double& e : c) e = std::clamp(e, 0.0, 1.0);
        bool dup = false;
        for (auto& z : zeros) {
            double d = 0;
            for (int a = 0; a < n; ++a) d = std::max(d, std::abs(z[a] - c[a]));
            if (d < 1e-7) dup = true;
        }
        if (!dup) zeros.push_back(c);
    } while (next());

    std::sort(zeros.begin(), zeros.end());
    std::vector<EquilibriumRecord> out;
    for (auto& z : zeros) {
        int on_boundary = 0, boundary_face = 0;
        std::vector<int> vc(n);
        for (int a = 0; a < n; ++a) {
            if (z[a] < 1e-9) {
                ++on_boundary;
                boundary_face = face_of(a, 0);
                vc[a] = 0;
            } else if (z[a] > 1.0 - 1e-9) {
                ++on_boundary;
                boundary_face = face_of(a, 1);
                vc[a] = 1;
            } else {
                vc[a] = -1;
            }
        }
        EqKind kind = on_boundary == n    ? EqKind::Vertex
                      : on_boundary == 1  ? EqKind::FaceInterior
                                          : EqKind::Interior;
        int index = 0;
        if (kind == EqKind::Vertex) index = vertex_id(vc);
        if (kind == EqKind::FaceInterior) index = boundary_face;
        out.push_back(make_record(game, z, {}, kind, index));
    }
    return out;
}

Collinearity collinearity_residual(const PolymatrixGame& game) {
    Collinearity res;
    auto faces = face_equilibria(game);
    auto interior = interior_equilibrium(game);
    if (faces.size() != 2 || !interior) return res;
    const auto& b1 = faces[0].x_exact;
    const auto& b2 = faces[1].x_exact;
    const auto& o = interior->x_exact;
    if (b1.empty() || b2.empty() || o.empty()) return res;
    // exact least-squares projection of O onto the segment direction
    Rat num(0), den(0);
    std::vector<Rat> d(3), w(3);
    for (int i = 0; i < 3; ++i) {
        d[i] = b2[i] - b1[i];
        w[i] = o[i] - b1[i];
        num += d[i] * w[i];
        den += d[i] * d[i];
    }
    if (den == 0) return res;
    res.k = num / den;
    double r2 = 0;
    for (int i = 0; i < 3; ++i) {
        double e = to_double(w[i] - res.k * d[i]);
        r2 += e * e;
    }
    res.residual = std::sqrt(r2);
    res.valid = true;
    return res;
}

Collinearity collinearity_residual(const Rat& mu) {
    return collinearity_residual(build_mu_family(mu));
}

// real part of the complex pair of Df at the interior equilibrium; NaN if
// the spectrum is all-real or the equilibrium is missing
static double pair_re_at(double mu, double* beta) {
    auto game = build_mu_family(Rat(mu));
    auto o = interior_equilibrium(game);
    if (!o) return std::numeric_limits<double>::quiet_NaN();
    auto ev = o->eigenvalues;
    for (const auto& l : ev) {
        if (std::abs(l.imag()) > 1e-9) {
            if (beta) *beta = std::abs(l.imag());
            return l.real();
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

BifurcationEvent find_hopf(double mu_lo, double mu_hi) {
    double beta = 0;
    double alo = pair_re_at(mu_lo, nullptr);
    double ahi = pair_re_at(mu_hi, nullptr);
    if (std::isnan(alo) || std::isnan(ahi) || alo * ahi > 0)
        throw std::runtime_error("no sign change of Re(complex pair) in bracket");
    double lo = mu_lo, hi = mu_hi, mid = 0.5 * (lo + hi), amid = 0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        amid = pair_re_at(mid, &beta);
        if (std::abs(amid) <= 1e-10 || (hi - lo) < 1e-13) break;
        if ((amid > 0) == (alo > 0)) {
            lo = mid;
            alo = amid;
        } else {
            hi = mid;
        }
    }
    // transversality by secant slope across the bracket
    double h = std::max(1e-4, (mu_hi - mu_lo) * 1e-3);
    double slope = (pair_re_at(mid + h, nullptr) - pair_re_at(mid - h, nullptr)) / (2 * h);
    if (std::abs(slope) < 1e-12)
        throw std::runtime_error("Hopf transversality check failed (zero slope)");
    if (!(beta > 0)) throw std::runtime_error("Hopf check failed: beta not positive");
    BifurcationEvent ev;
    ev.kind = BifurcationEvent::Kind::Hopf;
    ev.mu_star = mid;
    ev.subject = "O";
    ev.mu_lo = mu_lo;
    ev.mu_hi = mu_hi;
    ev.residual = std::abs(amid);
    return ev;
}

static double face_pair_re(double mu, int which) {
    auto game = build_mu_family(Rat(mu));
    auto faces = face_equilibria(game);
    if (static_cast<int>(faces.size()) <= which) return std::numeric_limits<double>::quiet_NaN();
    for (const auto& l : faces[which].eigenvalues)
        if (std::abs(l.imag()) > 1e-9) return l.real();
    return std::numeric_limits<double>::quiet_NaN();
}

BifurcationEvent find_transcritical(double mu_lo, double mu_hi) {
    double alo = face_pair_re(mu_lo, 0);
    double ahi = face_pair_re(mu_hi, 0);
    if (std::isnan(alo) || std::isnan(ahi) || alo * ahi > 0)
        throw std::runtime_error("no sign change of face-tangent Re in bracket");
    double lo = mu_lo, hi = mu_hi, mid = 0.5 * (lo + hi), amid = 0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        amid = face_pair_re(mid, 0);
        if (std::abs(amid) <= 1e-10 || (hi - lo) < 1e-13) break;
        if ((amid > 0) == (alo > 0)) {
            lo = mid;
            alo = amid;
        } else {
            hi = mid;
        }
    }
    BifurcationEvent ev;
    ev.kind = BifurcationEvent::Kind::Transcritical;
    ev.mu_star = mid;
    ev.subject = "B1,B2";
    ev.mu_lo = mu_lo;
    ev.mu_hi = mu_hi;
    ev.residual = std::abs(amid);
    return ev;
}

ResonanceReport check_nonresonance(const EquilibriumRecord& rec, double tol) {
    ResonanceReport rep;
    std::array<double, 3> re{};
    for (int i = 0; i < 3; ++i) re[i] = rec.eigenvalues[i].real();
    for (int i = 0; i < 3; ++i) {
        std::array<int, 2> others{};
        int o = 0;
        for (int j = 0; j < 3; ++j)
            if (j != i) others[o++] = j;
        for (int a = 0; a < 2; ++a) {
            for (int b = a; b < 2; ++b) {
                if (std::abs(re[i] - re[others[a]] - re[others[b]]) <= tol) {
                    rep.pass = false;
                    rep.witnesses.push_back({i, others[a], others[b]});
                }
            }
        }
    }
    return rep;
}

std::string equilibria_csv(const Rat& mu, const std::vector<EquilibriumRecord>& recs) {
    std::string out = "mu,kind,x,y,z,re1,im1,re2,im2,re3,im3,class\n";
    char buf[512];
    for (const auto& r : recs) {
        std::string kind = to_string(r.kind);
        if (r.kind == EqKind::Vertex) kind = "vertex:v" + std::to_string(r.index);
        if (r.kind == EqKind::FaceInterior) kind = "face:s" + std::to_string(r.index);
        std::snprintf(buf, sizeof buf,
                      "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                      to_string(mu).c_str(), kind.c_str(), r.x[0], r.x[1], r.x[2],
                      r.eigenvalues[0].real(), r.eigenvalues[0].imag(), r.eigenvalues[1].real(),
                      r.eigenvalues[1].imag(), r.eigenvalues[2].real(), r.eigenvalues[2].imag(),
                      to_string(r.cls).c_str());
        out += buf;
    }
    return out;
}

} // namespace hetcycle
