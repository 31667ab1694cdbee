#include "hetcycle/game.hpp"

#include <nlohmann/json.hpp>

namespace hetcycle {

namespace {

void check_square(const PolymatrixGame& g) {
    size_t t = static_cast<size_t>(g.total_strategies());
    if (g.payoff.size() != t)
        throw std::invalid_argument("payoff row count does not match strategy total");
    for (const auto& row : g.payoff)
        if (row.size() != t)
            throw std::invalid_argument("payoff matrix is not square");
}

} // namespace

PolymatrixGame build_mu_family(const Rat& mu) {
    PolymatrixGame g;
    g.group_sizes = {2, 2, 2};
    g.payoff.assign(6, std::vector<Rat>(6, Rat(0)));
    g.payoff[0] = {Rat(102), mu, Rat(0), Rat(-158), Rat(-18), Rat(-9)};
    g.payoff[2] = {Rat(-51), Rat(51), Rat(0), Rat(0), Rat(-9), Rat(18)};
    g.payoff[4] = {Rat(-102), Rat(-153), Rat(237), Rat(0), Rat(27), Rat(9)};
    g.reduced = true;
    return g;
}

PolymatrixGame reduce_payoff(const PolymatrixGame& game) {
    check_square(game);
    if (!game.all_binary())
        throw std::invalid_argument("reduce_payoff requires two strategies per group");
    PolymatrixGame out = game;
    int n = game.n_groups();
    for (int a = 0; a < n; ++a) {
        int r0 = game.group_offset(a);
        for (size_t j = 0; j < out.payoff[r0].size(); ++j) {
            out.payoff[r0][j] = game.payoff[r0][j] - game.payoff[r0 + 1][j];
            out.payoff[r0 + 1][j] = 0;
        }
    }
    out.reduced = true;
    return out;
}

CubeField cube_field(const PolymatrixGame& game) {
    check_square(game);
    if (!game.all_binary())
        throw std::invalid_argument("cube_field requires two strategies per group");
    if (!game.reduced)
        throw std::invalid_argument("cube_field requires a reduced game");
    int n = game.n_groups();
    CubeField f;
    f.n = n;
    f.coef.assign(n, std::vector<Rat>(n, Rat(0)));
    f.intercept.assign(n, Rat(0));
    // cube coordinate c_b is the frequency of the second strategy of group b;
    // the simplex point is x_{2b} = 1 - c_b, x_{2b+1} = c_b (0-based), and
    // g_a = -(row_{2a} . x).
    for (int a = 0; a < n; ++a) {
        const auto& row = game.payoff[game.group_offset(a)];
        for (int b = 0; b < n; ++b) {
            const Rat& p0 = row[game.group_offset(b)];
            const Rat& p1 = row[game.group_offset(b) + 1];
            f.intercept[a] -= p0;
            f.coef[a][b] = p0 - p1;
        }
    }
    f.coef_d.resize(static_cast<size_t>(n) * n);
    f.intercept_d.resize(n);
    for (int a = 0; a < n; ++a) {
        f.intercept_d[a] = to_double(f.intercept[a]);
        for (int b = 0; b < n; ++b) f.coef_d[static_cast<size_t>(a) * n + b] = to_double(f.coef[a][b]);
    }
    return f;
}

namespace {

template <typename S>
std::vector<S> field_cube_impl(const PolymatrixGame& game, const std::vector<S>& c) {
    CubeField f = cube_field(game);
    if (static_cast<int>(c.size()) != f.n)
        throw std::invalid_argument("cube point dimension mismatch");
    std::vector<S> v(f.n);
    for (int a = 0; a < f.n; ++a) {
        S g = S(f.intercept[a].convert_to<S>());
        for (int b = 0; b < f.n; ++b) g += S(f.coef[a][b].convert_to<S>()) * c[b];
        v[a] = c[a] * (S(1) - c[a]) * g;
    }
    return v;
}

template <typename S>
std::vector<S> field_simplex_impl(const PolymatrixGame& game, const std::vector<S>& x) {
    if (static_cast<int>(x.size()) != game.total_strategies())
        throw std::invalid_argument("simplex point dimension mismatch");
    int n = game.n_groups();
    for (int a = 0; a < n; ++a) {
        S s = S(0);
        for (int i = 0; i < game.group_sizes[a]; ++i) s += x[game.group_offset(a) + i];
        if (!(s == S(1))) {
            // allow tiny drift for doubles only
            if constexpr (std::is_same_v<S, double>) {
                if (std::abs(s - 1.0) > 1e-12)
                    throw std::invalid_argument("per-group coordinates must sum to 1");
            } else {
                throw std::invalid_argument("per-group coordinates must sum to 1");
            }
        }
    }
    int t = game.total_strategies();
    std::vector<S> px(t, S(0));
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) px[i] += S(game.payoff[i][j].convert_to<S>()) * x[j];
    std::vector<S> v(t);
    for (int a = 0; a < n; ++a) {
        S avg = S(0);
        for (int i = 0; i < game.group_sizes[a]; ++i) {
            int k = game.group_offset(a) + i;
            avg += x[k] * px[k];
        }
        for (int i = 0; i < game.group_sizes[a]; ++i) {
            int k = game.group_offset(a) + i;
            v[k] = x[k] * (px[k] - avg);
        }
    }
    return v;
}

} // namespace

std::vector<double> field_cube(const PolymatrixGame& game, const CubePoint& p) {
    return field_cube_impl<double>(game, p.coords);
}
std::vector<Rat> field_cube(const PolymatrixGame& game, const CubePointQ& p) {
    return field_cube_impl<Rat>(game, p.coords);
}
std::vector<double> field_simplex(const PolymatrixGame& game, const SimplexPoint& p) {
    return field_simplex_impl<double>(game, p.coords);
}
std::vector<Rat> field_simplex(const PolymatrixGame& game, const SimplexPointQ& p) {
    return field_simplex_impl<Rat>(game, p.coords);
}

namespace {

template <typename S>
std::vector<S> c2s(const std::vector<S>& c) {
    std::vector<S> x(2 * c.size());
    for (size_t a = 0; a < c.size(); ++a) {
        if constexpr (std::is_same_v<S, double>) {
            if (c[a] < -1e-15 || c[a] > 1.0 + 1e-15)
                throw std::invalid_argument("cube coordinate out of [0,1]");
        } else {
            if (c[a] < 0 || c[a] > 1) throw std::invalid_argument("cube coordinate out of [0,1]");
        }
        x[2 * a] = S(1) - c[a];
        x[2 * a + 1] = c[a];
    }
    return x;
}

template <typename S>
std::vector<S> s2c(const std::vector<S>& x) {
    if (x.size() % 2 != 0) throw std::invalid_argument("simplex point must have even dimension");
    std::vector<S> c(x.size() / 2);
    for (size_t a = 0; a < c.size(); ++a) c[a] = x[2 * a + 1];
    return c;
}

} // namespace

SimplexPoint cube_to_simplex(const CubePoint& p) { return {c2s(p.coords)}; }
SimplexPointQ cube_to_simplex(const CubePointQ& p) { return {c2s(p.coords)}; }
CubePoint simplex_to_cube(const SimplexPoint& p) { return {s2c(p.coords)}; }
CubePointQ simplex_to_cube(const SimplexPointQ& p) { return {s2c(p.coords)}; }

int vertex_id(const std::vector<int>& coords) {
    int id = 1;
    for (int c : coords) id = (id - 1) * 2 + c + 1;
    return id;
}

std::vector<int> vertex_coords(int id, int n) {
    std::vector<int> c(n);
    int v = id - 1;
    for (int a = n - 1; a >= 0; --a) {
        c[a] = v & 1;
        v >>= 1;
    }
    return c;
}

int face_of(int axis, int value) { return 2 * axis + (value == 1 ? 1 : 2); }

std::vector<int> active_faces(int vertex, int n) {
    std::vector<int> c = vertex_coords(vertex, n);
    std::vector<int> faces(n);
    for (int a = 0; a < n; ++a) faces[a] = face_of(a, c[a]);
    return faces;
}

PolymatrixGame load_game(const nlohmann::json& j) {
    if (j.contains("family")) {
        std::string fam = j.at("family").get<std::string>();
        if (fam != "paper-mu")
            throw std::invalid_argument("unknown family '" + fam + "' at /family");
        if (!j.contains("mu")) throw std::invalid_argument("missing 'mu' at /mu");
        const auto& m = j.at("mu");
        Rat mu = m.is_string() ? parse_rational(m.get<std::string>())
                               : parse_rational(m.dump());
        return build_mu_family(mu);
    }
    PolymatrixGame g;
    if (!j.contains("groups")) throw std::invalid_argument("missing 'groups' at /groups");
    g.group_sizes = j.at("groups").get<std::vector<int>>();
    for (int s : g.group_sizes)
        if (s <= 0) throw std::invalid_argument("group sizes must be positive at /groups");
    if (!j.contains("payoff")) throw std::invalid_argument("missing 'payoff' at /payoff");
    const auto& pj = j.at("payoff");
    if (!pj.is_array()) throw std::invalid_argument("payoff must be an array at /payoff");
    for (size_t r = 0; r < pj.size(); ++r) {
        std::vector<Rat> row;
        for (size_t c = 0; c < pj[r].size(); ++c) {
            const auto& e = pj[r][c];
            try {
                row.push_back(e.is_string() ? parse_rational(e.get<std::string>())
                                            : parse_rational(e.dump()));
            } catch (const std::exception& ex) {
                throw std::invalid_argument("bad payoff entry at /payoff/" + std::to_string(r) +
                                            "/" + std::to_string(c) + ": " + ex.what());
            }
        }
        g.payoff.push_back(std::move(row));
    }
    check_square(g);
    // detect reduced form
    g.reduced = g.all_binary();
    if (g.reduced) {
        for (int a = 0; a < g.n_groups() && g.reduced; ++a) {
            int r1 = g.group_offset(a) + 1;
            for (const Rat& e : g.payoff[r1])
                if (e != 0) {
                    g.reduced = false;
                    break;
                }
        }
    }
    return g;
}

nlohmann::json game_to_json(const PolymatrixGame& game) {
    nlohmann::json j;
    j["groups"] = game.group_sizes;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : game.payoff) {
        nlohmann::json r = nlohmann::json::array();
        for (const Rat& e : row) r.push_back(to_string(e));
        rows.push_back(r);
    }
    j["payoff"] = rows;
    return j;
}

} // namespace hetcycle
