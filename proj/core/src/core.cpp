#include "spinphase/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinphase {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

double expectation(const ProjectorState& rho, const Matrix& a) {
  return (rho.matrix * a).trace().real();
}

namespace {

// Multiply each column by a phase making its first non-negligible entry real
// positive.
void canonicalize_columns(Matrix& v) {
  for (int c = 0; c < v.cols(); ++c) {
    const double floor = 1e-12 * v.col(c).norm();
    for (int r = 0; r < v.rows(); ++r) {
      const Complex z = v(r, c);
      if (std::abs(z) > floor) {
        v.col(c) *= std::conj(z) / std::abs(z);
        break;
      }
    }
  }
}

bool lex_less(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace

SpectralDecomposition spectral_decompose(const Matrix& h) {
  if (!is_hermitian(h))
    throw std::invalid_argument("spectral_decompose: non-hermitian input, residual " +
                                std::to_string(max_abs(h - h.adjoint())));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_decompose: eigensolver failed");

  const int n = static_cast<int>(h.rows());
  Matrix v = solver.eigenvectors();
  Eigen::VectorXd w = solver.eigenvalues();
  canonicalize_columns(v);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (w[i] != w[j]) return w[i] > w[j];
    return lex_less(v.col(i), v.col(j));
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[i] = w[order[i]];
    out.eigenvectors.col(i) = v.col(order[i]);
  }
  return out;
}

Matrix evolution_operator(const Matrix& h, double t) {
  const SpectralDecomposition sd = spectral_decompose(h);
  const int n = static_cast<int>(h.rows());
  Vector phases(n);
  for (int i = 0; i < n; ++i)
    phases[i] = std::exp(Complex(0.0, -t * sd.eigenvalues[i]));
  return sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint();
}

PureState evolve(const Matrix& h, double t, const PureState& psi) {
  const SpectralDecomposition sd = spectral_decompose(h);
  const Vector proj = sd.eigenvectors.adjoint() * psi.amplitudes;
  Vector out = Vector::Zero(psi.dimension());
  for (int i = 0; i < psi.dimension(); ++i)
    out += std::exp(Complex(0.0, -t * sd.eigenvalues[i])) * proj[i] *
           sd.eigenvectors.col(i);
  return PureState(out);
}

Vector vec_row(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Vector v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i * n + j] = a(i, j);
  return v;
}

Matrix unvec_row(const Vector& v) {
  const int n = static_cast<int>(std::lround(std::sqrt(double(v.size()))));
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = v[i * n + j];
  return a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix left_right_superop(const Matrix& a, const Matrix& b) {
  return kron(a, b.transpose());
}

Matrix adjoint_superop(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  const Matrix id = Matrix::Identity(n, n);
  return kron(a, id) - kron(id, a.transpose());
}

Matrix projector_superop(const ProjectorState& rho) {
  const int n = rho.dimension();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& r = rho.matrix;
  return kron(r, id) + kron(id, r.transpose()) - 2.0 * kron(r, r.transpose());
}

Matrix density_superop(const ProjectorState& rho) {
  return kron(rho.matrix, rho.matrix.transpose());
}

PureState ProjectorState::ket() const {
  const SpectralDecomposition sd = spectral_decompose(matrix);
  return PureState(sd.eigenvectors.col(0));  // eigenvalue 1 sorts first
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return (gen_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Matrix random_hermitian(int n, Rng& rng) {
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = rng.gaussian();
    for (int j = i + 1; j < n; ++j) {
      const Complex z(rng.gaussian() / std::sqrt(2.0),
                      rng.gaussian() / std::sqrt(2.0));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

PureState random_state(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  return PureState::normalized(v);
}

Matrix random_unitary(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

PureState coherent_state(int n) {
  Vector v = Vector::Zero(n);
  v[0] = 1.0;
  return PureState(v);
}

PureState ghz_state() {
  Vector v = Vector::Zero(4);
  v[0] = 1.0 / std::sqrt(2.0);
  v[3] = -1.0 / std::sqrt(2.0);
  return PureState(v);
}

PureState tetrahedral_state() {
  Vector v = Vector::Zero(5);
  v[0] = 1.0 / std::sqrt(3.0);
  v[3] = std::sqrt(2.0) / std::sqrt(3.0);
  return PureState(v);
}

}  // namespace spinphase
