#include <doctest.h>

#include "hetcycle/analysis.hpp"
#include "hetcycle/dual_skeleton.hpp"

#include <map>
#include <random>

using namespace hetcycle;

namespace {

struct Fixture {
    PolymatrixGame game;
    std::vector<EquilibriumRecord> vspec;
    HeteroclinicGraph graph;
    Characters chars;
    explicit Fixture(const Rat& mu)
        : game(build_mu_family(mu)),
          vspec(vertex_spectrum(game)),
          graph(build_graph(vspec, 3)),
          chars(characters(vspec, 3)) {}
};

// appendix closed forms for the branch matrices over S = {g5, g8}
Mat2Q table_branch_matrix(int xi, const Rat& mu) {
    auto M = [](Rat a, Rat b, Rat c, Rat d) {
        Mat2Q m;
        m.m[0][0] = a;
        m.m[0][1] = b;
        m.m[1][0] = c;
        m.m[1][1] = d;
        return m;
    };
    switch (xi) {
        case 1:
            return M(42 * (mu - 176) / (37 * (18 - mu)), 0,
                     4029 * (mu - 106) / (518 * (18 - mu)), 1);
        case 2:
            return M(11 * (167 - mu) / 1495, 162 * (167 - mu) / 37375, Rat(3723, 1495),
                     Rat(-29434, 37375));
        case 3:
            return M(5 * (6502 - 41 * mu) / 23828, (190 - mu) / 322, Rat(2040, 851),
                     Rat(-16, 23));
        case 4:
            return M(Rat(531) / (8 * (mu - 9)), Rat(13, 40), Rat(7803) / (32 * (mu - 9)),
                     Rat(-99, 160));
        case 5:
            return M(Rat(294) / (5 * (mu - 18)), 63 * (mu - 32) / (155 * (mu - 18)),
                     Rat(1122) / (5 * (mu - 18)), (127 * mu + 4446) / (5580 - 310 * mu));
        case 6:
            return M(93 * (167 - mu) / (65 * (mu - 9)), 0, Rat(64464) / (715 * (mu - 9)), 1);
    }
    throw std::logic_error("bad branch index");
}

bool mat_eq(const Mat2Q& a, const Mat2Q& b) {
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            if (a.m[r][c] != b.m[r][c]) return false;
    return true;
}

// slope intervals of the branch sectors over S = {g5, g8}
std::pair<Rat, std::optional<Rat>> table_branch_sector(int xi, const Rat& mu) {
    switch (xi) {
        case 1: return {Rat(0), Rat(74, 255)};
        case 2: return {Rat(74, 75), std::nullopt};
        case 3: return {Rat(74, 255), Rat(74, 75)};
        case 4: return {11 * (mu - 9) / 4335, (mu - 9) / 93};
        case 5: return {(mu - 9) / 93, std::nullopt};
        case 6: return {Rat(0), 11 * (mu - 9) / 4335};
    }
    throw std::logic_error("bad branch index");
}

const std::vector<Rat> kSampleMus = {Rat(850, 11), Rat(90), Rat(96), Rat(99),
                                     Rat(101),     Rat(103), Rat(544, 5)};

} // namespace

TEST_CASE("characters negate the vertex spectra on active faces") {
    Fixture f(Rat(90));
    const CharacterVector& v1 = f.chars[1];
    CHECK(v1.active == std::vector<int>{2, 4, 6});
    CHECK(v1.comp == std::vector<Rat>{0, 84, 0, -60, 0, 162});
    const CharacterVector& v5 = f.chars[5];
    CHECK(v5.active == std::vector<int>{1, 4, 6});
    CHECK(v5.comp[0] == Rat(-72));
    CHECK(v5.comp[3] == Rat(42));
    CHECK(v5.comp[5] == Rat(111));
    // sign bookkeeping: v1 has two stable directions (positive character)
    int pos = 0, neg = 0;
    for (int face : v1.active) (v1.comp[face - 1] > 0 ? pos : neg)++;
    CHECK(pos == 2);
    CHECK(neg == 1);
    // zero eigenvalue rejected
    auto recs = vertex_spectrum(build_mu_family(Rat(18)));
    CHECK_THROWS_AS(character(recs[4], 3), std::invalid_argument);
}

TEST_CASE("single-vertex sector maps") {
    Fixture f(Rat(90));
    // at v3, continuing from g5 to g11 requires 75 u2 < 74 u6
    SectorMap sm = branch_map(f.graph, f.chars, 5, 11);
    CHECK(sm.sector.slope_lo == Rat(0));
    REQUIRE(sm.sector.slope_hi.has_value());
    CHECK(*sm.sector.slope_hi == Rat(74, 75));
    // continuing to g2 instead takes the complementary cone
    SectorMap sm2 = branch_map(f.graph, f.chars, 5, 2);
    CHECK(sm2.sector.slope_lo == Rat(74, 75));
    CHECK_FALSE(sm2.sector.slope_hi.has_value());
    // out-degree one vertex imposes no condition: v1 from g9 to g5
    SectorMap sm3 = branch_map(f.graph, f.chars, 9, 5);
    CHECK(sm3.sector.slope_lo == Rat(0));
    CHECK_FALSE(sm3.sector.slope_hi.has_value());
    CHECK(sm3.sector.ineqs.empty());
    // non-consecutive edges rejected
    CHECK_THROWS_AS(branch_map(f.graph, f.chars, 5, 8), std::invalid_argument);
}

TEST_CASE("minimum structural sets") {
    Fixture f(Rat(90));
    auto sets = structural_sets(f.graph);
    CHECK(sets.size() == 9);
    for (const auto& s : sets) CHECK(s.size() == 2);
    std::set<std::vector<int>> got(sets.begin(), sets.end());
    CHECK(got.count({5, 8}));
    CHECK(pick_canonical(sets) == std::vector<int>{5, 6});
}

TEST_CASE("structural sets on synthetic graphs") {
    HeteroclinicGraph ring;
    ring.n = 2;
    ring.edges = {{1, 1, 2, 0, {}}, {2, 2, 4, 1, {}}, {3, 4, 3, 0, {}}, {4, 3, 1, 1, {}}};
    ring.cycles = enumerate_cycles(ring, 4);
    auto sets = structural_sets(ring);
    CHECK(sets.size() == 4);  // any single edge
    for (const auto& s : sets) CHECK(s.size() == 1);
    CHECK(pick_canonical(sets) == std::vector<int>{1});

    // two disjoint 2-rings on a synthetic 8-vertex shell
    HeteroclinicGraph two;
    two.n = 3;
    two.edges = {{1, 1, 2, 0, {}}, {2, 2, 1, 0, {}}, {3, 3, 4, 0, {}}, {4, 4, 3, 0, {}}};
    two.cycles = enumerate_cycles(two, 4);
    auto tsets = structural_sets(two);
    REQUIRE_FALSE(tsets.empty());
    for (const auto& s : tsets) CHECK(s.size() == 2);
}

TEST_CASE("S-branches over the printed structural set") {
    Fixture f(Rat(90));
    auto branches = enumerate_s_branches({5, 8}, f.graph);
    REQUIRE(branches.size() == 6);
    CHECK(branches[0].edges == std::vector<int>{5, 11, 7, 9, 5});
    CHECK(branches[1].edges == std::vector<int>{5, 2, 12, 8});
    CHECK(branches[2].edges == std::vector<int>{5, 11, 4, 8});
    CHECK(branches[3].edges == std::vector<int>{8, 10, 1, 5});
    CHECK(branches[4].edges == std::vector<int>{8, 3, 9, 5});
    CHECK(branches[5].edges == std::vector<int>{8, 10, 6, 12, 8});
    // from/to table
    CHECK(branches[0].from_edge == 5);
    CHECK(branches[0].to_edge == 5);
    CHECK(branches[1].to_edge == 8);
    CHECK(branches[2].to_edge == 8);
    CHECK(branches[3].from_edge == 8);
    CHECK(branches[4].to_edge == 5);
    CHECK(branches[5].to_edge == 8);
}

TEST_CASE("all edges as a structural set gives consecutive pairs") {
    Fixture f(Rat(90));
    std::vector<int> all;
    for (const auto& e : f.graph.edges) all.push_back(e.id);
    auto branches = enumerate_s_branches(all, f.graph);
    CHECK(branches.size() == 16);  // sum over vertices of in*out
    for (const auto& b : branches) CHECK(b.edges.size() == 2);
}

TEST_CASE("a non-structural set is rejected naming an avoided cycle") {
    Fixture f(Rat(90));
    CHECK_THROWS_WITH_AS(enumerate_s_branches({5}, f.graph), doctest::Contains("v2,v4,v8,v6"),
                         std::invalid_argument);
}

TEST_CASE("skeleton matrices equal the closed forms exactly in rationals") {
    for (const Rat& mu : kSampleMus) {
        Fixture f(mu);
        auto branches = enumerate_s_branches({5, 8}, f.graph);
        for (int xi = 1; xi <= 6; ++xi) {
            BranchData d = skeleton_matrix(f.graph, f.chars, branches[xi - 1]);
            CHECK(mat_eq(d.M, table_branch_matrix(xi, mu)));
            auto [lo, hi] = table_branch_sector(xi, mu);
            CHECK(d.sector.slope_lo == lo);
            CHECK(d.sector.slope_hi == hi);
            CHECK_FALSE(d.sector.empty);
        }
    }
}

TEST_CASE("branch sector inequalities in integer form") {
    Fixture f(Rat(90));
    auto branches = enumerate_s_branches({5, 8}, f.graph);
    BranchData x1 = skeleton_matrix(f.graph, f.chars, branches[0]);
    // 255 u2 - 74 u6 < 0
    REQUIRE(x1.sector.ineqs.size() == 1);
    CHECK(x1.sector.ineqs[0].ci == Rat(-255));
    CHECK(x1.sector.ineqs[0].cj == Rat(74));
    BranchData x2 = skeleton_matrix(f.graph, f.chars, branches[1]);
    // 75 u2 - 74 u6 > 0
    REQUIRE(x2.sector.ineqs.size() == 1);
    CHECK(x2.sector.ineqs[0].ci == Rat(75));
    CHECK(x2.sector.ineqs[0].cj == Rat(-74));
    BranchData x3 = skeleton_matrix(f.graph, f.chars, branches[2]);
    CHECK(x3.sector.ineqs.size() == 2);
}

TEST_CASE("composite over xi1 at mu=90 matches the printed decimals") {
    Fixture f(Rat(90));
    auto branches = enumerate_s_branches({5, 8}, f.graph);
    BranchData d = skeleton_matrix(f.graph, f.chars, branches[0]);
    CHECK(to_double(d.M.m[0][0]) == doctest::Approx(1.3558558558558558).epsilon(1e-12));
    CHECK(to_double(d.M.m[1][0]) == doctest::Approx(1.7284427552285500).epsilon(1e-12));
    CHECK(d.M.m[0][1] == Rat(0));
    CHECK(d.M.m[1][1] == Rat(1));
}

TEST_CASE("cycle matrices from branch concatenation match the appendix") {
    Rat mu(96);
    Fixture f(mu);
    auto branches = enumerate_s_branches({5, 8}, f.graph);
    // H2 = xi2 (+) xi4 based at g5
    BranchData h2 = cycle_matrix(f.graph, f.chars, branches, {2, 4});
    Mat2Q expected;
    expected.m[0][0] = 3 * (3199 * mu + 740274) / (29900 * (mu - 9));
    expected.m[0][1] = -79 * (2572 * mu - 238203) / (373750 * (mu - 9));
    expected.m[1][0] = -398871 * (mu - 94) / (119600 * (mu - 9));
    expected.m[1][1] = -9 * (94624 * mu - 28591281) / (1495000 * (mu - 9));
    CHECK(mat_eq(h2.M, expected));
    // mismatched concatenation rejected
    CHECK_THROWS_AS(cycle_matrix(f.graph, f.chars, branches, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(cycle_matrix(f.graph, f.chars, branches, {1, 2}), std::invalid_argument);
}

TEST_CASE("cycle matrices straight from vertex cycles") {
    Rat mu(90);
    Fixture f(mu);
    // H6 based at g5: eigenvalues {42(176-mu)/(37(mu-18)), 1}
    BranchData h6 = cycle_matrix_from_cycle(f.graph, f.chars, {1, 3, 7, 5}, 5);
    StabilityVerdict v = eigen_verdict(h6.M, h6.sector);
    CHECK(v.lambda_max == doctest::Approx(to_double(42 * (176 - mu) / (37 * (mu - 18))))
                              .epsilon(1e-12));
    CHECK(v.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    // H1 based at g8: mu-dependent eigenvector (11(102-mu)/408, 1)
    BranchData h1 = cycle_matrix_from_cycle(f.graph, f.chars, {2, 4, 8, 6}, 8);
    StabilityVerdict v1 = eigen_verdict(h1.M, h1.sector);
    CHECK(v1.perron[0] == doctest::Approx(to_double(11 * (102 - mu) / 408)).epsilon(1e-10));
    CHECK_THROWS_AS(cycle_matrix_from_cycle(f.graph, f.chars, {1, 3, 7, 5}, 8),
                    std::invalid_argument);
}

TEST_CASE("verdicts follow the projective dictionary") {
    // H6 attracting at mu=90: Perron vector inside 255 u2 < 74 u6
    {
        Fixture f(Rat(90));
        BranchData d = cycle_matrix_from_cycle(f.graph, f.chars, {1, 3, 7, 5}, 5);
        StabilityVerdict v = eigen_verdict(d.M, d.sector);
        CHECK(v.verdict == Verdict::Attracting);
        CHECK(v.in_sector);
        CHECK(v.perron[0] == doctest::Approx(0.20588235294117646).epsilon(1e-10));
        CHECK(255 * v.perron[0] < 74);
        CHECK(v.lambda_max == doctest::Approx(1.3558558558558558).epsilon(1e-12));
        CHECK(v.multiplier == doctest::Approx(1.0 / 1.3558558558558558).epsilon(1e-10));
    }
    // H6 escapes at mu=103: the mu-dependent eigenvector leaves the quadrant
    {
        Fixture f(Rat(103));
        BranchData d = cycle_matrix_from_cycle(f.graph, f.chars, {1, 3, 7, 5}, 5);
        StabilityVerdict v = eigen_verdict(d.M, d.sector);
        CHECK(v.verdict == Verdict::EscapesSector);
        CHECK_FALSE(v.in_sector);
    }
    // identity matrix is degenerate
    {
        Mat2Q id;
        id.m[0][0] = 1;
        id.m[0][1] = 0;
        id.m[1][0] = 0;
        id.m[1][1] = 1;
        Sector s;
        CHECK(eigen_verdict(id, s).verdict == Verdict::Degenerate);
    }
    // H3 is never realizable: its sector system is infeasible
    {
        Fixture f(Rat(96));
        BranchData d = cycle_matrix_from_cycle(f.graph, f.chars, {1, 3, 4, 8, 6, 5}, 5);
        CHECK(d.sector.empty);
        CHECK(eigen_verdict(d.M, d.sector).verdict == Verdict::NotRealizable);
    }
    // escape target reported against sibling sectors
    {
        Fixture f(Rat(90));
        auto branches = enumerate_s_branches({5, 8}, f.graph);
        std::vector<std::pair<int, Sector>> siblings;
        for (const auto& b : branches)
            if (b.from_edge == 8)
                siblings.emplace_back(b.id, skeleton_matrix(f.graph, f.chars, b).sector);
        BranchData h1 = cycle_matrix_from_cycle(f.graph, f.chars, {2, 4, 8, 6}, 8);
        StabilityVerdict v = eigen_verdict(h1.M, h1.sector, &siblings);
        CHECK(v.verdict == Verdict::EscapesSector);
        CHECK(v.escapes_to == 4);  // the xi4 cone
    }
}

TEST_CASE("sector partition: branch cones tile each edge cone") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Rat& mu : {Rat(90), Rat(101)}) {
        Fixture f(mu);
        auto branches = enumerate_s_branches({5, 8}, f.graph);
        std::vector<BranchData> data;
        for (const auto& b : branches) data.push_back(skeleton_matrix(f.graph, f.chars, b));
        for (int edge : {5, 8}) {
            int boundary = 0;
            for (int k = 0; k < 10000; ++k) {
                double ui = u(rng), uj = u(rng);
                if (ui == 0 || uj == 0) continue;
                double slope = ui / uj;
                int inside = 0;
                bool on_boundary = false;
                for (size_t i = 0; i < branches.size(); ++i) {
                    if (branches[i].from_edge != edge) continue;
                    auto where = data[i].sector.locate(slope);
                    if (where == Sector::Where::Inside) ++inside;
                    if (where == Sector::Where::Boundary) on_boundary = true;
                }
                if (on_boundary) {
                    ++boundary;
                    continue;
                }
                CHECK(inside == 1);
            }
            CHECK(boundary < 10);  // < 0.1%
        }
    }
}

TEST_CASE("Perron iteration converges to the dominant direction") {
    std::mt19937 rng(43);
    Fixture f(Rat(90));
    BranchData d = cycle_matrix_from_cycle(f.graph, f.chars, {1, 3, 7, 5}, 5);
    StabilityVerdict v = eigen_verdict(d.M, d.sector);
    REQUIRE(v.verdict == Verdict::Attracting);
    double m00 = to_double(d.M.m[0][0]), m01 = to_double(d.M.m[0][1]);
    double m10 = to_double(d.M.m[1][0]), m11 = to_double(d.M.m[1][1]);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double lo = to_double(d.sector.slope_lo);
        double hi = d.sector.slope_hi ? to_double(*d.sector.slope_hi) : lo + 1.0;
        double slope = lo + (hi - lo) * u(rng);
        double x = slope, y = 1.0;
        for (int it = 0; it < 200; ++it) {
            double nx = m00 * x + m01 * y, ny = m10 * x + m11 * y;
            double n = std::hypot(nx, ny);
            x = nx / n;
            y = ny / n;
        }
        double dir = x / y;
        CHECK(std::abs(dir - v.perron[0]) <= 1e-8);
    }
}

TEST_CASE("verdicts agree across every minimum structural set") {
    for (const Rat& mu : {Rat(90), Rat(96), Rat(101)}) {
        Fixture f(mu);
        auto sets = structural_sets(f.graph);
        REQUIRE_FALSE(sets.empty());
        std::map<std::string, Verdict> reference;
        for (const auto& s : sets) {
            auto branches = enumerate_s_branches(s, f.graph);
            std::map<std::string, Verdict> verdicts;
            for (const auto& cyc : f.graph.cycles) {
                auto edges = cycle_edges(f.graph, cyc);
                // decompose the cycle into S-branches starting at its first S-edge
                int start = -1;
                for (size_t i = 0; i < edges.size() && start < 0; ++i)
                    if (std::count(s.begin(), s.end(), edges[i])) start = static_cast<int>(i);
                REQUIRE(start >= 0);
                std::vector<int> rot(edges.begin() + start, edges.end());
                rot.insert(rot.end(), edges.begin(), edges.begin() + start);
                rot.push_back(rot.front());
                std::vector<int> ids;
                size_t pos = 0;
                while (pos + 1 < rot.size()) {
                    bool found = false;
                    for (const auto& b : branches) {
                        size_t len = b.edges.size();
                        if (pos + len > rot.size()) continue;
                        if (std::equal(b.edges.begin(), b.edges.end(), rot.begin() + pos)) {
                            ids.push_back(b.id);
                            pos += len - 1;
                            found = true;
                            break;
                        }
                    }
                    REQUIRE(found);
                }
                BranchData d = cycle_matrix(f.graph, f.chars, branches, ids);
                verdicts[cycle_name(cyc)] = eigen_verdict(d.M, d.sector).verdict;
            }
            if (reference.empty())
                reference = verdicts;
            else
                CHECK(verdicts == reference);
        }
        // and the structural-set-free verdicts agree too
        MuAnalysis an = analyze_family(mu);
        for (const auto& ci : an.cycles) {
            REQUIRE(reference.count(ci.name));
            CHECK(reference.at(ci.name) == ci.verdict.verdict);
        }
    }
}
