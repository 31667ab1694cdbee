#include <doctest.h>

#include "hetcycle/game.hpp"

#include <nlohmann/json.hpp>

#include <random>

using namespace hetcycle;

namespace {

Rat rq(std::mt19937& rng, int lo = -200, int hi = 200) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, 40);
    return Rat(num(rng), den(rng));
}

PolymatrixGame random_game(std::mt19937& rng) {
    PolymatrixGame g;
    g.group_sizes = {2, 2, 2};
    g.payoff.assign(6, std::vector<Rat>(6));
    for (auto& row : g.payoff)
        for (auto& e : row) e = rq(rng);
    g.reduced = false;
    return g;
}

} // namespace

TEST_CASE("mu family matches the printed payoff matrix") {
    PolymatrixGame g0 = build_mu_family(Rat(0));
    CHECK(g0.payoff[0][0] == Rat(102));
    CHECK(g0.payoff[0][1] == Rat(0));
    CHECK(g0.payoff[4][2] == Rat(237));
    CHECK(g0.payoff[0][3] == Rat(-158));
    CHECK(build_mu_family(Rat(102)).payoff[0][1] == Rat(102));
    // second row of each group is zero for any mu
    PolymatrixGame g = build_mu_family(Rat(850, 11));
    for (int r : {1, 3, 5})
        for (const Rat& e : g.payoff[r]) CHECK(e == Rat(0));
}

TEST_CASE("reduce_payoff is idempotent on the family") {
    PolymatrixGame g = build_mu_family(Rat(90));
    PolymatrixGame r = reduce_payoff(g);
    CHECK(r.payoff == g.payoff);
}

TEST_CASE("reduce_payoff subtracts the second row per block") {
    std::mt19937 rng(7);
    PolymatrixGame g = random_game(rng);
    PolymatrixGame r = reduce_payoff(g);
    for (int a = 0; a < 3; ++a) {
        int r0 = 2 * a;
        for (int c = 0; c < 6; ++c) {
            CHECK(r.payoff[r0][c] == g.payoff[r0][c] - g.payoff[r0 + 1][c]);
            CHECK(r.payoff[r0 + 1][c] == Rat(0));
        }
    }
}

TEST_CASE("reduction preserves the cube field (general replicator oracle)") {
    // oracle: evaluate the full simplex replicator of the unreduced game
    // and transport to cube coordinates; must match the reduced cube field
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 5; ++trial) {
        PolymatrixGame g = random_game(rng);
        PolymatrixGame red = reduce_payoff(g);
        for (int k = 0; k < 20; ++k) {
            CubePointQ p{{rq(rng, 1, 39) / 40, rq(rng, 1, 39) / 40, rq(rng, 1, 39) / 40}};
            for (Rat& c : p.coords)
                if (c <= 0 || c >= 1) c = Rat(1, 2);
            auto vq = field_cube(red, p);
            auto sq = field_simplex(g, cube_to_simplex(p));
            for (int a = 0; a < 3; ++a) CHECK(vq[a] == sq[2 * a + 1]);  // exact
        }
        // and in doubles at random interior points
        for (int k = 0; k < 100; ++k) {
            CubePoint p{{u(rng), u(rng), u(rng)}};
            auto vd = field_cube(red, p);
            auto sd = field_simplex(g, cube_to_simplex(p));
            for (int a = 0; a < 3; ++a) CHECK(std::abs(vd[a] - sd[2 * a + 1]) <= 1e-12);
        }
    }
}

TEST_CASE("cube field values") {
    PolymatrixGame g = build_mu_family(Rat(90));
    auto v0 = field_cube(g, CubePoint{{0, 0, 0}});
    CHECK(v0[0] == 0.0);
    CHECK(v0[1] == 0.0);
    CHECK(v0[2] == 0.0);
    auto vc = field_cube(g, CubePoint{{0.5, 0.5, 0.5}});
    CHECK(vc[1] == doctest::Approx(-1.125).epsilon(1e-14));
    CHECK(vc[0] == doctest::Approx(-0.875).epsilon(1e-14));
    CHECK(vc[2] == doctest::Approx(-2.25).epsilon(1e-14));
    // faces are flow-invariant: z = 0 keeps dz/dt = 0 exactly
    auto vf = field_cube(g, CubePointQ{{Rat(1, 3), Rat(2, 7), Rat(0)}});
    CHECK(vf[2] == Rat(0));
}

TEST_CASE("flow invariance of all faces, exact in rationals") {
    std::mt19937 rng(3);
    PolymatrixGame g = build_mu_family(Rat(850, 11));
    for (int axis = 0; axis < 3; ++axis) {
        for (int val : {0, 1}) {
            for (int k = 0; k < 10; ++k) {
                CubePointQ p{{rq(rng, 1, 39) / 40, rq(rng, 1, 39) / 40, rq(rng, 1, 39) / 40}};
                p.coords[axis] = val;
                auto v = field_cube(g, p);
                CHECK(v[axis] == Rat(0));
            }
        }
    }
}

TEST_CASE("all eight vertices are exact equilibria for any mu") {
    std::mt19937 rng(5);
    for (int t = 0; t < 4; ++t) {
        PolymatrixGame g = build_mu_family(rq(rng));
        for (int vid = 1; vid <= 8; ++vid) {
            auto c = vertex_coords(vid, 3);
            CubePointQ p{{Rat(c[0]), Rat(c[1]), Rat(c[2])}};
            for (const Rat& comp : field_cube(g, p)) CHECK(comp == Rat(0));
        }
    }
}

TEST_CASE("simplex field basics") {
    PolymatrixGame g = build_mu_family(Rat(90));
    // any vertex of the simplex polytope is stationary
    SimplexPointQ v{{Rat(1), Rat(0), Rat(0), Rat(1), Rat(0), Rat(1)}};
    for (const Rat& comp : field_simplex(g, v)) CHECK(comp == Rat(0));
    // sum-1 violation rejected
    CHECK_THROWS_AS(field_simplex(g, SimplexPoint{{0.5, 0.6, 0.5, 0.5, 0.5, 0.5}}),
                    std::invalid_argument);
    // per-group velocity components cancel
    SimplexPoint p = cube_to_simplex(CubePoint{{0.5, 0.5, 0.5}});
    auto vs = field_simplex(g, p);
    for (int a = 0; a < 3; ++a)
        CHECK(vs[2 * a] + vs[2 * a + 1] == doctest::Approx(0.0).epsilon(1e-14));
    // consistency with the cube field under the vertex identification
    auto vcube = field_cube(g, CubePoint{{0.5, 0.5, 0.5}});
    CHECK(vs[0] == doctest::Approx(-vcube[0]).epsilon(1e-12));
}

TEST_CASE("cube/simplex conversions") {
    SimplexPoint s = cube_to_simplex(CubePoint{{0, 0, 0}});
    CHECK(s.coords == std::vector<double>{1, 0, 1, 0, 1, 0});
    s = cube_to_simplex(CubePoint{{1, 1, 1}});
    CHECK(s.coords == std::vector<double>{0, 1, 0, 1, 0, 1});
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        CubePoint p{{u(rng), u(rng), u(rng)}};
        CubePoint q = simplex_to_cube(cube_to_simplex(p));
        CHECK(q.coords == p.coords);  // exact round trip
    }
    CHECK_THROWS_AS(cube_to_simplex(CubePoint{{1.5, 0, 0}}), std::invalid_argument);
}

TEST_CASE("vertex numbering follows the standard identification") {
    CHECK(vertex_id({0, 0, 0}) == 1);
    CHECK(vertex_id({0, 0, 1}) == 2);
    CHECK(vertex_id({0, 1, 0}) == 3);
    CHECK(vertex_id({1, 0, 0}) == 5);
    CHECK(vertex_id({1, 1, 1}) == 8);
    CHECK(vertex_coords(7, 3) == std::vector<int>{1, 1, 0});
    CHECK(active_faces(1, 3) == std::vector<int>{2, 4, 6});
    CHECK(active_faces(8, 3) == std::vector<int>{1, 3, 5});
}

TEST_CASE("game JSON round trip and family selection") {
    PolymatrixGame g = build_mu_family(Rat(850, 11));
    nlohmann::json j = game_to_json(g);
    PolymatrixGame back = load_game(j);
    CHECK(back.payoff == g.payoff);
    CHECK(back.reduced);

    nlohmann::json fam = {{"family", "paper-mu"}, {"mu", "850/11"}};
    CHECK(load_game(fam).payoff == g.payoff);
    nlohmann::json fam2 = {{"family", "paper-mu"}, {"mu", 90}};
    CHECK(load_game(fam2).payoff == build_mu_family(Rat(90)).payoff);

    CHECK_THROWS_WITH_AS(load_game(nlohmann::json{{"family", "unknown"}, {"mu", 1}}),
                         doctest::Contains("/family"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(load_game(nlohmann::json{{"groups", {2, 2, 2}}}),
                         doctest::Contains("/payoff"), std::invalid_argument);
    nlohmann::json bad = {{"groups", {2, 2, 2}}, {"payoff", nlohmann::json::array()}};
    for (int r = 0; r < 6; ++r) bad["payoff"].push_back(std::vector<std::string>(6, "1/2"));
    bad["payoff"][2][3] = "oops";
    CHECK_THROWS_WITH_AS(load_game(bad), doctest::Contains("/payoff/2/3"), std::invalid_argument);
}

TEST_CASE("reduce rejects non-binary groups") {
    PolymatrixGame g;
    g.group_sizes = {3, 2};
    g.payoff.assign(5, std::vector<Rat>(5, Rat(1)));
    CHECK_THROWS_AS(reduce_payoff(g), std::invalid_argument);
}
