#pragma once

#include "hetcycle/game.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace hetcycle {

enum class EqKind { Vertex, FaceInterior, Interior };

enum class EqClass {
    Sink,
    Source,
    Saddle,
    SaddleFocus12,  // complex pair unstable, real stable (dim W^s = 1)
    SaddleFocus21,  // complex pair stable, real unstable
    NonHyperbolic
};

std::string to_string(EqKind k);
std::string to_string(EqClass c);

struct EquilibriumRecord {
    EqKind kind = EqKind::Interior;
    int index = 0;  // vertex id or face id, 0 for interior
    std::vector<double> x;
    std::vector<Rat> x_exact;  // empty when no exact form was recovered
    std::array<std::complex<double>, 3> eigenvalues{};
    // vertices: exact eigenvalue per orthogonal face, keyed by face id
    std::vector<std::pair<int, Rat>> face_eigs;
    EqClass cls = EqClass::NonHyperbolic;
};

struct BifurcationEvent {
    enum class Kind { Transcritical, Hopf, SectorCrossing };
    Kind kind;
    double mu_star = 0;
    std::string subject;
    double mu_lo = 0, mu_hi = 0;
    double residual = 0;
};

std::string to_string(BifurcationEvent::Kind k);

// Hyperbolicity tolerance: |Re lambda| below this flags NonHyperbolic.
inline constexpr double kHyperbolicTol = 1e-8;

// 3x3 dense matrices are enough for everything downstream.
using Mat3 = std::array<std::array<double, 3>, 3>;

// Analytic Jacobian of the cube field (closed-form partials, no
// differencing). Rational overload is exact at rational points.
Mat3 jacobian(const PolymatrixGame& game, const CubePoint& p);
std::vector<std::vector<Rat>> jacobian(const PolymatrixGame& game, const CubePointQ& p);

// Roots of det(J - lambda I) for a 3x3 matrix, solved in closed form
// (trigonometric/Cardano branches); falls back to an iterative QR solve
// when the closed form loses accuracy.
std::array<std::complex<double>, 3> cubic_eigenvalues(const Mat3& m);
std::array<std::complex<double>, 3> cubic_eigenvalues_qr(const Mat3& m);

EqClass classify_spectrum(const std::array<std::complex<double>, 3>& ev,
                          double tol = kHyperbolicTol);

// Exact spectra of the 2^n vertices, one real eigenvalue per active face.
std::vector<EquilibriumRecord> vertex_spectrum(const PolymatrixGame& game);

// Zeros of the field restricted to each open face, located by damped
// Newton from a 9x9 grid and polished to exact rationals (the restricted
// system is affine for binary groups).
std::vector<EquilibriumRecord> face_equilibria(const PolymatrixGame& game,
                                               std::vector<std::string>* warnings = nullptr);

// Newton from the centroid with a 5^3 multistart fallback.
std::optional<EquilibriumRecord> interior_equilibrium(const PolymatrixGame& game);

// Full multistart sweep used by the "no other equilibria" property.
std::vector<EquilibriumRecord> all_equilibria(const PolymatrixGame& game, int grid = 20);

struct Collinearity {
    double residual = 0;  // distance from the interior equilibrium to [B1 B2]
    Rat k;                // projection parameter along the segment
    bool valid = false;
};

Collinearity collinearity_residual(const PolymatrixGame& game);
Collinearity collinearity_residual(const Rat& mu);

// Bisection on the real part of the complex pair of Df at the interior
// equilibrium of the mu-family. Checks transversality and beta > 0.
BifurcationEvent find_hopf(double mu_lo, double mu_hi);

// Bisection on the real part of the face-tangent pair of the face
// equilibria of the mu-family.
BifurcationEvent find_transcritical(double mu_lo, double mu_hi);

struct ResonanceReport {
    bool pass = true;
    // violating triples as (i, j, k): Re l_i = Re l_j + Re l_k
    std::vector<std::array<int, 3>> witnesses;
};

ResonanceReport check_nonresonance(const EquilibriumRecord& rec, double tol = 1e-9);

// Exact rational linear solve (Gaussian elimination); returns nullopt on
// a singular system.
std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> a,
                                               std::vector<Rat> b);

std::string equilibria_csv(const Rat& mu, const std::vector<EquilibriumRecord>& recs);

} // namespace hetcycle
