// Fubini-Study geometry of the projective space in the chart psi^0 != 0, and
// the embedded geometry (tangent projection, complex structure, metric and
// symplectic form) on the projector manifold inside the hermitian matrices.
#pragma once

#include <vector>

#include "spinphase/core.hpp"

namespace spinphase {

// Chart coordinates z^i = psi^i / psi^0. w^i is the conjugate, and
// Delta = 1 + sum_i z^i w^i.
struct ChartPoint {
  Vector z;

  ChartPoint() = default;
  explicit ChartPoint(Vector zz) : z(std::move(zz)) {}

  int n() const { return static_cast<int>(z.size()); }
  Complex w(int i) const { return std::conj(z[i]); }
  double delta() const { return 1.0 + z.squaredNorm(); }
};

// Chart of a ket; rejects states too close to the chart boundary psi^0 = 0.
ChartPoint chart(const PureState& psi);

// rho^{mu nu} = Delta^{-1} z^mu w^nu with z^0 = 1.
ProjectorState embed(const ChartPoint& p);

// Rank-3 array G[c](a,b) = Gamma^c_{ab}; the barred symbols are the complex
// conjugates and all mixed components vanish.
struct MetricData {
  Matrix g;                         // g_{a bbar}
  Matrix g_inv;                     // g^{a bbar}, g_{a rbar} g^{b rbar} = delta_ab
  std::vector<Matrix> christoffel;  // christoffel[c](a,b)
  ChartPoint point;
};

MetricData fs_metric(const ChartPoint& p);

// R_{a bbar c dbar}, all other independent components zero.
class RiemannTensor {
 public:
  RiemannTensor(int n) : n_(n), data_(size_t(n) * n * n * n, Complex(0)) {}
  Complex& operator()(int a, int b, int c, int d) {
    return data_[((size_t(a) * n_ + b) * n_ + c) * n_ + d];
  }
  Complex operator()(int a, int b, int c, int d) const {
    return data_[((size_t(a) * n_ + b) * n_ + c) * n_ + d];
  }
  int n() const { return n_; }

 private:
  int n_;
  std::vector<Complex> data_;
};

RiemannTensor riemann(const ChartPoint& p);

// First and second derivatives of the embedding map in the chart.
struct EmbeddingJet {
  ProjectorState rho;
  std::vector<Matrix> d_z;                  // rho_a
  std::vector<Matrix> d_w;                  // rho_{abar}
  std::vector<std::vector<Matrix>> d_zz;    // rho_{ab}
  std::vector<std::vector<Matrix>> d_zw;    // rho_{a bbar}
  std::vector<std::vector<Matrix>> d_ww;    // rho_{abar bbar}
};

EmbeddingJet embedding_jet(const ChartPoint& p);

// Double commutator [rho, [rho, A]] = rho A rhot + rhot A rho: tangential
// (odd) part of A at rho.
Matrix tangent_project(const ProjectorState& rho, const Matrix& a);

// Even (normal) part rho A rho + rhot A rhot.
Matrix normal_project(const ProjectorState& rho, const Matrix& a);

bool is_tangent(const ProjectorState& rho, const Matrix& a, double eps = 1e-9);

// J(X) = i [X, rho]; the input is tangent-projected first.
Matrix complex_structure(const ProjectorState& rho, const Matrix& x);

// G(X, Y) = Tr(XY)/2, the bi-invariant metric on hermitian matrices.
double metric_G(const Matrix& x, const Matrix& y);

// omega(X, Y) = G(J(X), Y) = Tr(i[X, rho] Y)/2 for X, Y tangent at rho;
// equivalently 2i omega(X, Y) = Tr(rho [X, Y]).
double symplectic_omega(const ProjectorState& rho, const Matrix& x,
                        const Matrix& y);

}  // namespace spinphase
