#pragma once

#include "hetcycle/rational.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hetcycle {

// A polymatrix game on a product of 1-simplices. The payoff matrix is
// block-partitioned by group pairs; a reduced game has the second row of
// every group block-row identically zero, which leaves the cube vector
// field unchanged.
struct PolymatrixGame {
    std::vector<int> group_sizes;          // strategies per group
    std::vector<std::vector<Rat>> payoff;  // (sum sizes) x (sum sizes)
    bool reduced = false;

    int n_groups() const { return static_cast<int>(group_sizes.size()); }
    int total_strategies() const {
        int t = 0;
        for (int s : group_sizes) t += s;
        return t;
    }
    bool all_binary() const {
        for (int s : group_sizes)
            if (s != 2) return false;
        return true;
    }
    // first simplex-coordinate index (0-based) of group a (0-based)
    int group_offset(int a) const {
        int off = 0;
        for (int b = 0; b < a; ++b) off += group_sizes[b];
        return off;
    }
};

template <typename S>
struct CubePointT {
    std::vector<S> coords;
};
using CubePoint = CubePointT<double>;
using CubePointQ = CubePointT<Rat>;

template <typename S>
struct SimplexPointT {
    std::vector<S> coords;
};
using SimplexPoint = SimplexPointT<double>;
using SimplexPointQ = SimplexPointT<Rat>;

// The one-parameter family studied throughout: three groups of two
// strategies, entry (1,2) equal to mu, zero rows for second strategies.
PolymatrixGame build_mu_family(const Rat& mu);

// Row-difference reduction for groups of two strategies; idempotent.
PolymatrixGame reduce_payoff(const PolymatrixGame& game);

// Cube representation of a reduced all-binary game: d c_a/dt =
// c_a (1-c_a) * g_a(c) with g_a affine. Doubles are kept alongside the
// exact coefficients for the integrator.
struct CubeField {
    int n = 0;
    std::vector<std::vector<Rat>> coef;  // n x n
    std::vector<Rat> intercept;          // n
    std::vector<double> coef_d;          // row-major n x n
    std::vector<double> intercept_d;

    void eval(const double* c, double* out) const {
        for (int i = 0; i < n; ++i) {
            double g = intercept_d[i];
            const double* row = coef_d.data() + static_cast<size_t>(i) * n;
            for (int j = 0; j < n; ++j) g += row[j] * c[j];
            out[i] = c[i] * (1.0 - c[i]) * g;
        }
    }
};

CubeField cube_field(const PolymatrixGame& game);

std::vector<double> field_cube(const PolymatrixGame& game, const CubePoint& p);
std::vector<Rat> field_cube(const PolymatrixGame& game, const CubePointQ& p);

// Full replicator field on the product of simplices (works for unreduced
// games as well); the per-group components of the result sum to zero.
std::vector<double> field_simplex(const PolymatrixGame& game, const SimplexPoint& p);
std::vector<Rat> field_simplex(const PolymatrixGame& game, const SimplexPointQ& p);

SimplexPoint cube_to_simplex(const CubePoint& p);
SimplexPointQ cube_to_simplex(const CubePointQ& p);
CubePoint simplex_to_cube(const SimplexPoint& p);
CubePointQ simplex_to_cube(const SimplexPointQ& p);

// Vertex numbering: id = 1 + sum_a c_a 2^(n-1-a), matching v1=(0,..,0).
int vertex_id(const std::vector<int>& coords);
std::vector<int> vertex_coords(int id, int n);
// Faces: face 2a+1 = {c_a = 1}, face 2a+2 = {c_a = 0}, a = 0..n-1 (ids 1-based).
int face_of(int axis, int value);  // axis 0-based, value in {0,1}
std::vector<int> active_faces(int vertex, int n);

// Game-definition file: {"groups":[...],"payoff":[[...]]} with rational
// entries as numbers or "p/q" strings, or {"family":"paper-mu","mu":Q}.
PolymatrixGame load_game(const nlohmann::json& j);
nlohmann::json game_to_json(const PolymatrixGame& game);

} // namespace hetcycle
