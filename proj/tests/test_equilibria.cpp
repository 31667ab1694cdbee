#include <doctest.h>

#include "hetcycle/equilibria.hpp"

#include <map>
#include <random>

using namespace hetcycle;

namespace {

// vertex spectra as printed, keyed (vertex, face) -> eigenvalue(mu)
std::map<std::pair<int, int>, Rat> table_vertex_eigs(const Rat& mu) {
    return {
        {{1, 2}, Rat(-84)},   {{1, 4}, Rat(60)},   {{1, 6}, Rat(-162)},
        {{2, 2}, Rat(-93)},   {{2, 4}, Rat(33)},   {{2, 5}, Rat(144)},
        {{3, 2}, Rat(74)},    {{3, 3}, Rat(-60)},  {{3, 6}, Rat(75)},
        {{4, 2}, Rat(65)},    {{4, 3}, Rat(-33)},  {{4, 5}, Rat(-93)},
        {{5, 1}, mu - 18},    {{5, 4}, Rat(-42)},  {{5, 6}, Rat(-111)},
        {{6, 1}, mu - 9},     {{6, 4}, Rat(-69)},  {{6, 5}, Rat(93)},
        {{7, 1}, mu - 176},   {{7, 3}, Rat(42)},   {{7, 6}, Rat(126)},
        {{8, 1}, mu - 167},   {{8, 3}, Rat(69)},   {{8, 5}, Rat(-144)},
    };
}

const EquilibriumRecord& face_by_id(const std::vector<EquilibriumRecord>& faces, int id) {
    for (const auto& f : faces)
        if (f.index == id) return f;
    throw std::runtime_error("face equilibrium not found");
}

} // namespace

TEST_CASE("vertex spectra reproduce the eigenvalue table exactly") {
    for (const Rat& mu : {Rat(850, 11), Rat(90), Rat(100), Rat(544, 5)}) {
        auto recs = vertex_spectrum(build_mu_family(mu));
        REQUIRE(recs.size() == 8);
        auto table = table_vertex_eigs(mu);
        for (const auto& r : recs) {
            REQUIRE(r.face_eigs.size() == 3);
            for (const auto& [face, l] : r.face_eigs) {
                REQUIRE(table.count({r.index, face}));
                CHECK(l == table.at({r.index, face}));
            }
        }
    }
    // spot values
    auto recs = vertex_spectrum(build_mu_family(Rat(100)));
    std::map<int, Rat> v7(recs[6].face_eigs.begin(), recs[6].face_eigs.end());
    CHECK(v7.at(1) == Rat(-76));
    CHECK(v7.at(3) == Rat(42));
    CHECK(v7.at(6) == Rat(126));
}

TEST_CASE("a zero vertex eigenvalue flags non-hyperbolicity") {
    auto recs = vertex_spectrum(build_mu_family(Rat(18)));
    CHECK(recs[4].cls == EqClass::NonHyperbolic);  // v5, mu - 18 = 0
}

TEST_CASE("face equilibria match the closed forms exactly") {
    for (const Rat& mu : {Rat(90), Rat(96), Rat(103)}) {
        auto faces = face_equilibria(build_mu_family(mu));
        REQUIRE(faces.size() == 2);
        const auto& b1 = face_by_id(faces, 5);
        const auto& b2 = face_by_id(faces, 6);
        CHECK(b1.x_exact == std::vector<Rat>{Rat(11, 34), (2040 + 11 * mu) / 5372, Rat(1)});
        CHECK(b2.x_exact == std::vector<Rat>{Rat(10, 17), (204 + 5 * mu) / 1343, Rat(0)});
    }
    CHECK(face_by_id(face_equilibria(build_mu_family(Rat(90))), 5).x[1] ==
          doctest::Approx(0.5640357408).epsilon(1e-9));
}

TEST_CASE("face equilibria classification flips at the transcritical value") {
    auto f90 = face_equilibria(build_mu_family(Rat(90)));
    CHECK(face_by_id(f90, 5).cls == EqClass::SaddleFocus12);
    CHECK(face_by_id(f90, 6).cls == EqClass::SaddleFocus12);
    auto f103 = face_equilibria(build_mu_family(Rat(103)));
    CHECK(face_by_id(f103, 5).cls == EqClass::Sink);
    CHECK(face_by_id(f103, 6).cls == EqClass::Sink);
    auto f102 = face_equilibria(build_mu_family(Rat(102)));
    CHECK(face_by_id(f102, 5).cls == EqClass::NonHyperbolic);
}

TEST_CASE("face equilibria carry the printed real eigenvalues") {
    for (const Rat& mu : {Rat(90), Rat(99), Rat(105)}) {
        auto faces = face_equilibria(build_mu_family(mu));
        double expect1 = to_double((2550 - 33 * mu) / 68);
        double expect2 = to_double((15 * mu - 1632) / 17);
        auto real_eig = [](const EquilibriumRecord& r) {
            for (const auto& l : r.eigenvalues)
                if (std::abs(l.imag()) < 1e-10) return l.real();
            return std::numeric_limits<double>::quiet_NaN();
        };
        CHECK(real_eig(face_by_id(faces, 5)) == doctest::Approx(expect1).epsilon(1e-10));
        CHECK(real_eig(face_by_id(faces, 6)) == doctest::Approx(expect2).epsilon(1e-10));
    }
}

TEST_CASE("interior equilibrium matches the closed form") {
    Rat mu(90);
    auto o = interior_equilibrium(build_mu_family(mu));
    REQUIRE(o.has_value());
    CHECK(o->x_exact ==
          std::vector<Rat>{68 / (442 - 3 * mu), 2 * (9180 - 61 * mu) / (79 * (442 - 3 * mu)),
                           4 * (544 - 5 * mu) / (1326 - 9 * mu)});
    CHECK(o->x[0] == doctest::Approx(0.39534883720930231).epsilon(1e-12));
    CHECK(o->x[1] == doctest::Approx(0.54312628790108918).epsilon(1e-12));
    CHECK(o->x[2] == doctest::Approx(0.72868217054263562).epsilon(1e-12));
}

TEST_CASE("interior equilibrium limits onto the face equilibria") {
    // near the left endpoint it approaches B1 in sigma_5, near the right
    // endpoint B2 in sigma_6
    auto olo = interior_equilibrium(build_mu_family(Rat(850, 11) + Rat(1, 1000000)));
    REQUIRE(olo.has_value());
    CHECK(olo->x[0] == doctest::Approx(11.0 / 34).epsilon(1e-4));
    CHECK(olo->x[1] == doctest::Approx(85.0 / 158).epsilon(1e-4));
    CHECK(olo->x[2] == doctest::Approx(1.0).epsilon(1e-4));
    auto ohi = interior_equilibrium(build_mu_family(Rat(544, 5) - Rat(1, 1000000)));
    REQUIRE(ohi.has_value());
    CHECK(ohi->x[0] == doctest::Approx(10.0 / 17).epsilon(1e-4));
    CHECK(ohi->x[1] == doctest::Approx(44.0 / 79).epsilon(1e-4));
    CHECK(std::abs(ohi->x[2]) < 1e-4);
    // at the exact endpoint the affine zero sits on the boundary
    CHECK_FALSE(interior_equilibrium(build_mu_family(Rat(544, 5))).has_value());
}

TEST_CASE("interior equilibrium lies on the segment between face equilibria") {
    for (const Rat& mu : {Rat(90), Rat(80), Rat(105)}) {
        auto c = collinearity_residual(mu);
        REQUIRE(c.valid);
        CHECK(c.residual <= 1e-12);
        CHECK(c.k == (850 - 11 * mu) / (9 * mu - 1326));
        CHECK(c.k >= 0);
        CHECK(c.k <= 1);
    }
    CHECK(collinearity_residual(Rat(850, 11)).k == Rat(0));
    CHECK(collinearity_residual(Rat(544, 5)).k == Rat(1));
}

TEST_CASE("analytic jacobian") {
    Rat mu(90);
    PolymatrixGame g = build_mu_family(mu);
    auto o = interior_equilibrium(g);
    REQUIRE(o.has_value());
    Mat3 j = jacobian(g, CubePoint{o->x});
    // printed (1,1) entry of Df at the interior equilibrium
    CHECK(j[0][0] == doctest::Approx(84864.0 / 29584.0).epsilon(1e-9));
    // at vertices the jacobian is diagonal with the table entries
    Mat3 jv = jacobian(g, CubePoint{{0, 0, 0}});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != c) CHECK(jv[r][c] == 0.0);
    CHECK(jv[0][0] == doctest::Approx(-84));
    CHECK(jv[1][1] == doctest::Approx(60));
    CHECK(jv[2][2] == doctest::Approx(-162));
}

TEST_CASE("jacobian agrees with central finite differences") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    PolymatrixGame g = build_mu_family(Rat(96));
    const double h = 1e-6;
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        CubePoint p{{u(rng), u(rng), u(rng)}};
        Mat3 j = jacobian(g, p);
        for (int col = 0; col < 3; ++col) {
            CubePoint pp = p, pm = p;
            pp.coords[col] += h;
            pm.coords[col] -= h;
            auto vp = field_cube(g, pp), vm = field_cube(g, pm);
            for (int row = 0; row < 3; ++row)
                worst = std::max(worst, std::abs(j[row][col] - (vp[row] - vm[row]) / (2 * h)));
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("closed-form cubic solver agrees with the QR fallback") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-150, 150);
    for (int k = 0; k < 60; ++k) {
        Mat3 m;
        for (auto& row : m)
            for (auto& e : row) e = u(rng);
        auto a = cubic_eigenvalues(m);
        auto b = cubic_eigenvalues_qr(m);
        for (int i = 0; i < 3; ++i) {
            double scale = std::max(1.0, std::abs(b[i]));
            CHECK(std::abs(a[i] - b[i]) <= 1e-7 * scale);
        }
    }
}

TEST_CASE("characteristic roots satisfy the residual bound") {
    PolymatrixGame g = build_mu_family(Rat(101));
    auto o = interior_equilibrium(g);
    REQUIRE(o.has_value());
    Mat3 m = jacobian(g, CubePoint{o->x});
    auto ev = cubic_eigenvalues(m);
    double tr = m[0][0] + m[1][1] + m[2][2];
    double s2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                m[1][1] * m[2][2] - m[1][2] * m[2][1];
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    for (auto l : ev) CHECK(std::abs(((l - tr) * l + s2) * l - det) <= 1e-8 * 1e6);
}

TEST_CASE("Hopf bifurcation of the interior equilibrium") {
    BifurcationEvent ev = find_hopf(104.5, 105.5);
    CHECK(ev.kind == BifurcationEvent::Kind::Hopf);
    CHECK(ev.mu_star >= 104.9);
    CHECK(ev.mu_star <= 105.2);
    CHECK(ev.residual <= 1e-10);
    // signs on the printed bracketing window
    auto re_at = [](double mu) {
        auto o = interior_equilibrium(build_mu_family(Rat(mu)));
        REQUIRE(o.has_value());
        for (const auto& l : o->eigenvalues)
            if (std::abs(l.imag()) > 1e-9) return l.real();
        return std::numeric_limits<double>::quiet_NaN();
    };
    CHECK(re_at(104.99) > 0);
    CHECK(re_at(105.09) < 0);
    CHECK_THROWS(find_hopf(90.0, 95.0));
}

TEST_CASE("transcritical crossing of the face equilibria") {
    BifurcationEvent ev = find_transcritical(101.0, 103.0);
    CHECK(ev.mu_star == doctest::Approx(102.0).epsilon(1e-10));
    CHECK(ev.residual <= 1e-10);
    // both face equilibria flip their tangent pair at the same value
    auto tangent_re = [](const Rat& mu, int face) {
        auto faces = face_equilibria(build_mu_family(mu));
        for (const auto& f : faces) {
            if (f.index != face) continue;
            for (const auto& l : f.eigenvalues)
                if (std::abs(l.imag()) > 1e-9) return l.real();
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
    for (int face : {5, 6}) {
        CHECK(tangent_re(Rat(10199, 100), face) > 0);
        CHECK(tangent_re(Rat(10201, 100), face) < 0);
    }
}

TEST_CASE("non-resonance checks") {
    auto recs = vertex_spectrum(build_mu_family(Rat(90)));
    CHECK(check_nonresonance(recs[0], 1e-9).pass);  // v1: (-84, 60, -162)
    EquilibriumRecord synthetic;
    synthetic.eigenvalues = {std::complex<double>(2, 0), std::complex<double>(1, 0),
                             std::complex<double>(1, 0)};
    auto rep = check_nonresonance(synthetic, 1e-9);
    CHECK_FALSE(rep.pass);
    REQUIRE_FALSE(rep.witnesses.empty());
    CHECK(rep.witnesses.front()[0] == 0);  // lambda_1 = lambda_2 + lambda_3
    // resonances over a parameter sweep are isolated
    int flagged = 0;
    for (int i = 0; i <= 1000; ++i) {
        Rat mu = Rat(850, 11) + (Rat(544, 5) - Rat(850, 11)) * i / 1000;
        for (const auto& r : vertex_spectrum(build_mu_family(mu)))
            if (!check_nonresonance(r, 1e-9).pass) {
                ++flagged;
                break;
            }
    }
    CHECK(flagged <= 5);
}

TEST_CASE("multistart sweep finds exactly the 11 equilibria") {
    for (const Rat& mu : {Rat(90), Rat(96), Rat(103)}) {
        auto all = all_equilibria(build_mu_family(mu), 20);
        int vertices = 0, face_int = 0, interior = 0;
        for (const auto& r : all) {
            if (r.kind == EqKind::Vertex) ++vertices;
            if (r.kind == EqKind::FaceInterior) ++face_int;
            if (r.kind == EqKind::Interior) ++interior;
        }
        CHECK(vertices == 8);
        CHECK(face_int == 2);
        CHECK(interior == 1);
        CHECK(all.size() == 11);
    }
}

TEST_CASE("equilibrium CSV shape") {
    auto recs = vertex_spectrum(build_mu_family(Rat(90)));
    std::string csv = equilibria_csv(Rat(90), recs);
    CHECK(csv.substr(0, csv.find('\n')) ==
          "mu,kind,x,y,z,re1,im1,re2,im2,re3,im3,class");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    CHECK(csv.find("vertex:v1") != std::string::npos);
}
