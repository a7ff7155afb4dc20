#include "spinphase/geometry.hpp"

#include <cmath>

namespace spinphase {

namespace {
constexpr double kChartFloor = 1e-8;
}

ChartPoint chart(const PureState& psi) {
  const Complex psi0 = psi.amplitudes[0];
  if (std::abs(psi0) < kChartFloor)
    throw std::domain_error("chart: |psi^0| below chart validity floor");
  const int n = psi.dimension() - 1;
  Vector z(n);
  for (int i = 0; i < n; ++i) z[i] = psi.amplitudes[i + 1] / psi0;
  return ChartPoint(z);
}

ProjectorState embed(const ChartPoint& p) {
  const int n = p.n();
  Vector zf(n + 1);
  zf[0] = 1.0;
  for (int i = 0; i < n; ++i) zf[i + 1] = p.z[i];
  ProjectorState rho;
  rho.matrix = (zf * zf.adjoint()) / p.delta();
  return rho;
}

MetricData fs_metric(const ChartPoint& p) {
  const int n = p.n();
  const double d = p.delta();
  MetricData m;
  m.point = p;
  m.g.resize(n, n);
  m.g_inv.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double kd = (a == b) ? 1.0 : 0.0;
      m.g(a, b) = 0.5 / (d * d) * (d * kd - p.z[b] * p.w(a));
      m.g_inv(a, b) = 2.0 * d * (kd + p.z[a] * p.w(b));
    }
  m.christoffel.assign(n, Matrix::Zero(n, n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Complex v = 0.0;
        if (c == b) v += p.w(a);
        if (c == a) v += p.w(b);
        m.christoffel[c](a, b) = -v / d;
      }
  return m;
}

RiemannTensor riemann(const ChartPoint& p) {
  // Constant holomorphic sectional curvature 4 for this metric normalization
  // (the projective line is a round sphere of radius 1/2), so the prefactor
  // is 2, as the finite-difference assembly from the Christoffel symbols
  // confirms.
  const int n = p.n();
  const MetricData m = fs_metric(p);
  RiemannTensor r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          r(a, b, c, d) = 2.0 * (m.g(a, b) * m.g(c, d) + m.g(a, d) * m.g(c, b));
  return r;
}

EmbeddingJet embedding_jet(const ChartPoint& p) {
  const int n = p.n();
  const int N = n + 1;
  const double d = p.delta();
  Vector zf(N), wf(N);
  zf[0] = 1.0;
  wf[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    zf[i + 1] = p.z[i];
    wf[i + 1] = p.w(i);
  }

  EmbeddingJet jet;
  jet.rho = embed(p);
  jet.d_z.assign(n, Matrix::Zero(N, N));
  jet.d_w.assign(n, Matrix::Zero(N, N));
  jet.d_zz.assign(n, std::vector<Matrix>(n, Matrix::Zero(N, N)));
  jet.d_zw.assign(n, std::vector<Matrix>(n, Matrix::Zero(N, N)));
  jet.d_ww.assign(n, std::vector<Matrix>(n, Matrix::Zero(N, N)));

  const double d2 = d * d, d3 = d2 * d;
  for (int a = 1; a <= n; ++a) {
    for (int mu = 0; mu < N; ++mu)
      for (int nu = 0; nu < N; ++nu) {
        const double dma = (mu == a) ? 1.0 : 0.0;
        const double dna = (nu == a) ? 1.0 : 0.0;
        jet.d_z[a - 1](mu, nu) = (d * dma * wf[nu] - zf[mu] * wf[nu] * wf[a]) / d2;
        jet.d_w[a - 1](mu, nu) = (d * dna * zf[mu] - zf[a] * zf[mu] * wf[nu]) / d2;
      }
  }
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int mu = 0; mu < N; ++mu)
        for (int nu = 0; nu < N; ++nu) {
          const double dma = (mu == a) ? 1.0 : 0.0;
          const double dmb = (mu == b) ? 1.0 : 0.0;
          const double dna = (nu == a) ? 1.0 : 0.0;
          const double dnb = (nu == b) ? 1.0 : 0.0;
          const double dab = (a == b) ? 1.0 : 0.0;
          jet.d_zz[a - 1][b - 1](mu, nu) =
              (2.0 * zf[mu] * wf[nu] * wf[a] * wf[b] -
               d * (dma * wf[b] * wf[nu] + dmb * wf[a] * wf[nu])) /
              d3;
          jet.d_zw[a - 1][b - 1](mu, nu) =
              (2.0 * zf[b] * zf[mu] * wf[a] * wf[nu] -
               d * (dma * zf[b] * wf[nu] + dnb * zf[mu] * wf[a] +
                    dab * zf[mu] * wf[nu] - d * dma * dnb)) /
              d3;
          jet.d_ww[a - 1][b - 1](mu, nu) =
              (2.0 * zf[a] * zf[b] * zf[mu] * wf[nu] -
               d * (dna * zf[b] * zf[mu] + dnb * zf[a] * zf[mu])) /
              d3;
        }
  return jet;
}

Matrix tangent_project(const ProjectorState& rho, const Matrix& a) {
  const Matrix rhot = Matrix::Identity(rho.dimension(), rho.dimension()) - rho.matrix;
  return rho.matrix * a * rhot + rhot * a * rho.matrix;
}

Matrix normal_project(const ProjectorState& rho, const Matrix& a) {
  const Matrix rhot = Matrix::Identity(rho.dimension(), rho.dimension()) - rho.matrix;
  return rho.matrix * a * rho.matrix + rhot * a * rhot;
}

bool is_tangent(const ProjectorState& rho, const Matrix& a, double eps) {
  return max_abs(a - tangent_project(rho, a)) <= eps;
}

Matrix complex_structure(const ProjectorState& rho, const Matrix& x) {
  // [X, rho] only sees the odd part of X, so projecting first is implicit.
  return Complex(0.0, 1.0) * commutator(x, rho.matrix);
}

double metric_G(const Matrix& x, const Matrix& y) {
  return 0.5 * (x * y).trace().real();
}

double symplectic_omega(const ProjectorState& rho, const Matrix& x,
                        const Matrix& y) {
  return metric_G(complex_structure(rho, x), y);
}

}  // namespace spinphase
