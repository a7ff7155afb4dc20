// Exact complex-hermitian primitives: spectral decomposition, unitary
// evolution, and row-major operator vectorization with the associated
// superoperators.
#pragma once

#include <cstdint>
#include <random>

#include "spinphase/types.hpp"

namespace spinphase {

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

// <A> in the state rho, i.e. Tr(rho A); real part returned.
double expectation(const ProjectorState& rho, const Matrix& a);

// Eigenvalues descending; degenerate blocks ordered by phase-canonicalized
// eigenvector lexicographic order so outputs are reproducible.
SpectralDecomposition spectral_decompose(const Matrix& h);

// e^{-itH} |psi> via the spectral decomposition.
PureState evolve(const Matrix& h, double t, const PureState& psi);
Matrix evolution_operator(const Matrix& h, double t);

// Row-major vectorization |A> = (A_00, A_01, ..., A_nn)^T and its inverse.
Vector vec_row(const Matrix& a);
Matrix unvec_row(const Vector& v);

Matrix kron(const Matrix& a, const Matrix& b);

// left/right multiplication superoperators in the row-major convention:
// (A (x) B^T) |C> = |A C B>.
Matrix left_right_superop(const Matrix& a, const Matrix& b);

// Adjoint representation of A: |X> -> |[A, X]|>.
Matrix adjoint_superop(const Matrix& a);

// Tangent projection as a superoperator:
// P = rho (x) I + I (x) rho^T - 2 rho (x) rho^T; satisfies P^2 = P and
// P = R^2 with R the adjoint representation of rho.
Matrix projector_superop(const ProjectorState& rho);

// R = |rho><rho| = rho (x) rho^T.
Matrix density_superop(const ProjectorState& rho);

// --- seeded random sampling -------------------------------------------------

// Deterministic per-index stream derivation (splitmix64 over (seed, index)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // Portable N(0,1): Box-Muller on top of the engine, so that streams do not
  // depend on the standard library's normal_distribution implementation.
  double gaussian();
  double uniform();  // [0, 1)
 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// GUE-style hermitian draw: real diagonal of unit variance, off-diagonal
// complex entries of total variance 1 (1/2 per real component).
Matrix random_hermitian(int n, Rng& rng);

// Haar-ish random ket (gaussian components, normalized).
PureState random_state(int n, Rng& rng);

// Random unitary via QR of a gaussian matrix, phases fixed.
Matrix random_unitary(int n, Rng& rng);

// Named kets used across the project.
PureState coherent_state(int n);      // (1, 0, ..., 0)
PureState ghz_state();                // (1, 0, 0, -1)/sqrt(2), spin 3/2
PureState tetrahedral_state();        // (1, 0, 0, sqrt(2), 0)/sqrt(3), spin 2

}  // namespace spinphase
