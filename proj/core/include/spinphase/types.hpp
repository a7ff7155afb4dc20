// Basic value types for spin-state geometry: kets, rank-1 projectors,
// hermitian operators and their N^2-dimensional vectorized forms.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinphase {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Tolerances used by the value-type validators.
namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double unit_norm = 1e-12;
inline constexpr double idempotent = 1e-10;
inline constexpr double unit_trace = 1e-12;
inline constexpr double antipodal = 1e-12;
}  // namespace tol

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double eps = tol::hermitian) {
  return max_abs(m - m.adjoint()) <= eps;
}

// Unit-norm state vector; component 0 carries magnetic number m = s.
struct PureState {
  Vector amplitudes;

  PureState() = default;
  explicit PureState(Vector amps) : amplitudes(std::move(amps)) {
    if (amplitudes.size() < 2)
      throw std::invalid_argument("PureState: dimension must be >= 2");
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > tol::unit_norm)
      throw std::invalid_argument("PureState: norm deviates by " +
                                  std::to_string(std::abs(n - 1.0)));
  }

  static PureState normalized(const Vector& amps) {
    const double n = amps.norm();
    if (n == 0.0) throw std::invalid_argument("PureState: zero vector");
    return PureState(Vector(amps / n));
  }

  int dimension() const { return static_cast<int>(amplitudes.size()); }
  double spin() const { return 0.5 * (dimension() - 1); }

  Complex overlap(const PureState& other) const {
    return amplitudes.dot(other.amplitudes);  // Eigen dot conjugates lhs
  }
};

// Rank-1 hermitian projector with unit trace: a point of the projective space
// embedded in the hermitian matrices.
struct ProjectorState {
  Matrix matrix;

  ProjectorState() = default;
  explicit ProjectorState(Matrix m) : matrix(std::move(m)) { validate(); }

  static ProjectorState from_ket(const PureState& psi) {
    const Vector& a = psi.amplitudes;
    ProjectorState p;
    p.matrix = a * a.adjoint();
    return p;
  }

  void validate() const {
    if (!is_hermitian(matrix))
      throw std::invalid_argument("ProjectorState: not hermitian, residual " +
                                  std::to_string(max_abs(matrix - matrix.adjoint())));
    if (max_abs(matrix * matrix - matrix) > tol::idempotent)
      throw std::invalid_argument("ProjectorState: not idempotent, residual " +
                                  std::to_string(max_abs(matrix * matrix - matrix)));
    if (std::abs(matrix.trace() - Complex(1.0)) > 100 * tol::unit_trace)
      throw std::invalid_argument("ProjectorState: trace != 1");
  }

  int dimension() const { return static_cast<int>(matrix.rows()); }

  // Representative ket: dominant eigenvector, largest-|component| made real
  // positive for determinism.
  PureState ket() const;
};

// Spectral data of a hermitian operator. Eigenvalues sorted descending; ties
// broken by the phase-canonicalized eigenvectors' lexicographic order.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // columns, orthonormal

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

}  // namespace spinphase
