#include "spinphase/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinphase/brachistophase.hpp"

namespace spinphase {

namespace {

// Phase-fix b against a: multiply b so that <a|b> is real non-negative.
Vector rephase(const Vector& a, const Vector& b) {
  const Complex ov = a.dot(b);
  if (std::abs(ov) < 1e-300) return b;
  return b * (std::conj(ov) / std::abs(ov));
}

}  // namespace

Curve Curve::schroedinger(const Matrix& h, const ProjectorState& rho0) {
  if (!is_hermitian(h))
    throw std::invalid_argument("Curve::schroedinger: non-hermitian generator");
  Curve c;
  c.kind_ = Kind::Schroedinger;
  c.n_ = rho0.dimension();
  c.rho0_ = rho0;
  c.h_ = h;
  c.hspec_ = spectral_decompose(h);
  return c;
}

Curve Curve::geodesic(const ProjectorState& rho0, const ProjectorState& rho1) {
  return geodesic_between(rho0, rho1).curve;
}

Curve Curve::sampled(std::vector<double> times, std::vector<PureState> states) {
  if (times.size() != states.size() || times.size() < 2)
    throw std::invalid_argument("Curve::sampled: need matching times/states");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("Curve::sampled: times must increase");
  Curve c;
  c.kind_ = Kind::Sampled;
  c.n_ = states.front().dimension();
  // Smooth the gauge: each ket re-phased for real-positive overlap with its
  // predecessor.
  for (size_t i = 1; i < states.size(); ++i)
    states[i] = PureState(rephase(states[i - 1].amplitudes, states[i].amplitudes));
  c.times_ = std::move(times);
  c.states_ = std::move(states);
  c.node_rho_.reserve(c.states_.size());
  for (const auto& s : c.states_) c.node_rho_.push_back(ProjectorState::from_ket(s).matrix);
  c.rho0_ = ProjectorState(c.node_rho_.front());
  return c;
}

const Matrix& Curve::hamiltonian() const {
  if (kind_ != Kind::Schroedinger)
    throw std::logic_error("Curve: hamiltonian only defined for Schroedinger curves");
  return h_;
}

double Curve::geodesic_length() const {
  if (kind_ != Kind::Geodesic)
    throw std::logic_error("Curve: length only defined for geodesic curves");
  return length_;
}

const PureState& Curve::geodesic_xi() const {
  if (kind_ != Kind::Geodesic)
    throw std::logic_error("Curve: xi only defined for geodesic curves");
  return xi_;
}

const PureState& Curve::geodesic_psi0() const {
  if (kind_ != Kind::Geodesic)
    throw std::logic_error("Curve: psi0 only defined for geodesic curves");
  return psi0_;
}

Vector Curve::sampled_ket(double t, Vector* dket) const {
  const auto& ts = times_;
  if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12)
    throw std::domain_error("Curve::sampled: t outside sample domain");
  // 4-point Lagrange interpolation on the re-phased kets.
  size_t hi = std::lower_bound(ts.begin(), ts.end(), t) - ts.begin();
  if (hi == 0) hi = 1;
  size_t first = (hi >= 2) ? hi - 2 : 0;
  if (first + 4 > ts.size()) first = ts.size() - 4;
  if (ts.size() < 4) first = 0;
  const size_t m = std::min<size_t>(4, ts.size());

  Vector val = Vector::Zero(n_);
  Vector der = Vector::Zero(n_);
  for (size_t i = 0; i < m; ++i) {
    double li = 1.0;
    double dli = 0.0;
    for (size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double denom = ts[first + i] - ts[first + j];
      dli = dli * (t - ts[first + j]) / denom + li / denom;
      li *= (t - ts[first + j]) / denom;
    }
    val += li * states_[first + i].amplitudes;
    der += dli * states_[first + i].amplitudes;
  }
  if (dket) *dket = der;
  return val;
}

ProjectorState Curve::at(double t) const {
  switch (kind_) {
    case Kind::Schroedinger: {
      const int n = n_;
      Vector phases(n);
      for (int i = 0; i < n; ++i)
        phases[i] = std::exp(Complex(0.0, -t * hspec_.eigenvalues[i]));
      const Matrix u = hspec_.eigenvectors * phases.asDiagonal() *
                       hspec_.eigenvectors.adjoint();
      ProjectorState out;
      out.matrix = u * rho0_.matrix * u.adjoint();
      // keep hermitian against roundoff
      out.matrix = 0.5 * (out.matrix + out.matrix.adjoint().eval());
      return out;
    }
    case Kind::Geodesic: {
      const Vector psi = std::cos(length_ * t) * psi0_.amplitudes +
                         std::sin(length_ * t) * xi_.amplitudes;
      return ProjectorState::from_ket(PureState::normalized(psi));
    }
    case Kind::Sampled: {
      const Vector psi = sampled_ket(t, nullptr);
      return ProjectorState::from_ket(PureState::normalized(psi));
    }
  }
  throw std::logic_error("Curve::at: unreachable");
}

Matrix Curve::derivative(double t) const {
  switch (kind_) {
    case Kind::Schroedinger:
      return Complex(0.0, -1.0) * commutator(h_, at(t).matrix);
    case Kind::Geodesic: {
      const double L = length_;
      const Vector psi = std::cos(L * t) * psi0_.amplitudes +
                         std::sin(L * t) * xi_.amplitudes;
      const Vector dpsi = L * (-std::sin(L * t) * psi0_.amplitudes +
                               std::cos(L * t) * xi_.amplitudes);
      return dpsi * psi.adjoint() + psi * dpsi.adjoint();
    }
    case Kind::Sampled: {
      Vector dpsi;
      const Vector psi = sampled_ket(t, &dpsi);
      const double c = psi.squaredNorm();
      const double dc = 2.0 * psi.dot(dpsi).real();
      Matrix rho = psi * psi.adjoint();
      Matrix drho = dpsi * psi.adjoint() + psi * dpsi.adjoint();
      return drho / c - rho * (dc / (c * c));
    }
  }
  throw std::logic_error("Curve::derivative: unreachable");
}

std::optional<std::vector<Vector>> Curve::ket_taylor(int order) const {
  std::vector<Vector> coeffs;
  coeffs.reserve(order + 1);
  switch (kind_) {
    case Kind::Schroedinger: {
      // psi_k = (-iH)^k psi_0 / k!
      Vector cur = rho0_.ket().amplitudes;
      double fact = 1.0;
      for (int k = 0; k <= order; ++k) {
        coeffs.push_back(cur / fact);
        cur = Complex(0.0, -1.0) * (h_ * cur);
        fact *= (k + 1);
      }
      return coeffs;
    }
    case Kind::Geodesic: {
      // psi(t) = cos(Lt) psi0 + sin(Lt) xi
      double fact = 1.0;
      for (int k = 0; k <= order; ++k) {
        const double Lk = std::pow(length_, k);
        // d^k cos at 0 over k!: cycle 1, 0, -1, 0; sin: 0, 1, 0, -1
        static const double cosc[4] = {1.0, 0.0, -1.0, 0.0};
        static const double sinc[4] = {0.0, 1.0, 0.0, -1.0};
        coeffs.push_back((Lk * cosc[k % 4] / fact) * psi0_.amplitudes +
                         (Lk * sinc[k % 4] / fact) * xi_.amplitudes);
        fact *= (k + 1);
      }
      return coeffs;
    }
    case Kind::Sampled:
      return std::nullopt;
  }
  return std::nullopt;
}

GeodesicConnection geodesic_between(const ProjectorState& rho0,
                                    const ProjectorState& rho1) {
  const double fidelity = (rho0.matrix * rho1.matrix).trace().real();
  if (fidelity <= tol::antipodal)
    throw std::domain_error("geodesic_between: endpoints (anti)orthogonal, xi not unique");
  if (fidelity >= 1.0 - 1e-14)
    throw std::domain_error("geodesic_between: endpoints coincide");

  PureState psi0 = rho0.ket();
  Vector psi1 = rephase(psi0.amplitudes, rho1.ket().amplitudes);
  const double cosL = std::min(1.0, psi0.amplitudes.dot(psi1).real());
  const double L = std::acos(cosL);
  Vector xi = (psi1 - cosL * psi0.amplitudes) / std::sin(L);

  // Joint gauge: make the largest-|.| component of xi real positive.
  int imax = 0;
  for (int i = 1; i < xi.size(); ++i)
    if (std::abs(xi[i]) > std::abs(xi[imax])) imax = i;
  const Complex ph = std::conj(xi[imax]) / std::abs(xi[imax]);
  xi *= ph;
  Vector psi0g = psi0.amplitudes * ph;

  GeodesicConnection out;
  out.length = L;
  out.xi = PureState::normalized(xi);
  Curve c;
  c.kind_ = Curve::Kind::Geodesic;
  c.n_ = rho0.dimension();
  c.rho0_ = rho0;
  c.psi0_ = PureState::normalized(psi0g);
  c.xi_ = out.xi;
  c.length_ = L;
  out.curve = c;
  return out;
}

std::vector<Matrix> ambient_derivatives(const Curve& c, double t, int order) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("ambient_derivatives: order must be 1..4");
  std::vector<Matrix> out;
  out.reserve(order);
  switch (c.kind()) {
    case Curve::Kind::Schroedinger: {
      Matrix cur = c.at(t).matrix;
      for (int k = 1; k <= order; ++k) {
        cur = Complex(0.0, -1.0) * commutator(c.hamiltonian(), cur);
        out.push_back(cur);
      }
      return out;
    }
    case Curve::Kind::Geodesic: {
      // d^k cos(Lt) = L^k cos(Lt + k pi/2), same for sin; Leibniz on
      // |psi><psi|.
      const double L = c.geodesic_length();
      const Vector& psi0 = c.geodesic_psi0().amplitudes;
      const Vector& xi = c.geodesic_xi().amplitudes;
      const double half_pi = std::numbers::pi / 2.0;
      std::vector<Vector> dk(order + 1);
      for (int k = 0; k <= order; ++k) {
        const double Lk = std::pow(L, k);
        dk[k] = Lk * std::cos(L * t + k * half_pi) * psi0 +
                Lk * std::sin(L * t + k * half_pi) * xi;
      }
      static const double binom[5][5] = {{1, 0, 0, 0, 0},
                                         {1, 1, 0, 0, 0},
                                         {1, 2, 1, 0, 0},
                                         {1, 3, 3, 1, 0},
                                         {1, 4, 6, 4, 1}};
      for (int k = 1; k <= order; ++k) {
        Matrix m = Matrix::Zero(c.dimension(), c.dimension());
        for (int j = 0; j <= k; ++j)
          m += binom[k][j] * dk[j] * dk[k - j].adjoint();
        out.push_back(m);
      }
      return out;
    }
    case Curve::Kind::Sampled: {
      const auto& ts = c.sample_times();
      const int need = 2 * order + 1;
      if (static_cast<int>(ts.size()) < need)
        throw std::domain_error("ambient_derivatives: not enough samples");
      // locate the nearest node and check local uniformity
      size_t k0 = std::min_element(ts.begin(), ts.end(), [&](double a, double b) {
                    return std::abs(a - t) < std::abs(b - t);
                  }) - ts.begin();
      int lo = static_cast<int>(k0) - order;
      if (lo < 0) lo = 0;
      if (lo + need > static_cast<int>(ts.size())) lo = static_cast<int>(ts.size()) - need;
      const double h = ts[lo + 1] - ts[lo];
      for (int i = lo; i + 1 < lo + need; ++i)
        if (std::abs((ts[i + 1] - ts[i]) - h) > 1e-9 * std::abs(h))
          throw std::domain_error("ambient_derivatives: sample grid not uniform around t");

      std::vector<Matrix> nodes;
      for (int i = 0; i < need; ++i) nodes.push_back(c.at(ts[lo + i]).matrix);
      const int ctr = static_cast<int>(k0) - lo;

      auto stencil = [&](const std::vector<double>& w, double scale) {
        Matrix m = Matrix::Zero(c.dimension(), c.dimension());
        const int half = static_cast<int>(w.size()) / 2;
        for (size_t i = 0; i < w.size(); ++i) {
          const int idx = ctr - half + static_cast<int>(i);
          m += w[i] * nodes[idx];
        }
        return (m / scale).eval();
      };
      // central stencils, order h^2
      if (order >= 1) out.push_back(stencil({-0.5, 0.0, 0.5}, h));
      if (order >= 2) out.push_back(stencil({1.0, -2.0, 1.0}, h * h));
      if (order >= 3) out.push_back(stencil({-0.5, 1.0, 0.0, -1.0, 0.5}, h * h * h));
      if (order >= 4) out.push_back(stencil({1.0, -4.0, 6.0, -4.0, 1.0}, h * h * h * h));
      return out;
    }
  }
  throw std::logic_error("ambient_derivatives: unreachable");
}

Matrix geodesic_transvection(const ProjectorState& from, const ProjectorState& to) {
  const int n = from.dimension();
  const double fidelity = (from.matrix * to.matrix).trace().real();
  if (fidelity >= 1.0 - 1e-15) return Matrix::Identity(n, n);
  if (fidelity <= tol::antipodal)
    throw std::domain_error("geodesic_transvection: antipodal endpoints");

  const Vector psi0 = from.ket().amplitudes;
  const Vector psi1 = rephase(psi0, to.ket().amplitudes);
  const double cosL = std::clamp(psi0.dot(psi1).real(), -1.0, 1.0);
  const double L = std::acos(cosL);
  const Vector xi = (psi1 - cosL * psi0) / std::sin(L);
  const Matrix chi =
      Complex(0.0, 1.0) * (xi * psi0.adjoint() - psi0 * xi.adjoint());
  const Matrix chi2 = chi * chi;
  return Matrix::Identity(n, n) - Complex(0.0, std::sin(L)) * chi -
         (1.0 - std::cos(L)) * chi2;
}

namespace {

struct JetAt {
  Matrix v, alpha, beta;
  ProjectorState rho;
};

JetAt raw_jet(const Curve& c, double t) {
  JetAt j;
  j.rho = c.at(t);
  const auto d = ambient_derivatives(c, t, 3);
  j.v = d[0];
  j.alpha = tangent_project(j.rho, d[1]);
  // beta = (d3 rho)^par + [rho, [rhod, rhodd]]
  j.beta = tangent_project(j.rho, d[2]) +
           commutator(j.rho.matrix, commutator(d[0], d[1]));
  return j;
}

Matrix transported_beta(const Curve& c, double t, double dt,
                        const ProjectorState& rho_t) {
  const JetAt j = raw_jet(c, t + dt);
  const Matrix u = geodesic_transvection(rho_t, j.rho);
  return u.adjoint() * j.beta * u;
}

}  // namespace

CovariantJet covariant_jet(const Curve& c, double t) {
  CovariantJet jet;
  const JetAt j0 = raw_jet(c, t);
  jet.rho = j0.rho;
  jet.v = j0.v;
  jet.alpha = j0.alpha;
  jet.beta = j0.beta;
  jet.mu = 0.5 * (j0.v * j0.v).trace().real();
  jet.speed_sq = metric_G(j0.v, j0.v);

  // gamma: transported central difference of beta, Richardson extrapolated.
  const double h = 1e-3;
  auto central = [&](double step) {
    const Matrix bp = transported_beta(c, t, step, j0.rho);
    const Matrix bm = transported_beta(c, t, -step, j0.rho);
    return ((bp - bm) / (2.0 * step)).eval();
  };
  const Matrix d_h = central(h);
  const Matrix d_h2 = central(0.5 * h);
  Matrix gamma = (4.0 * d_h2 - d_h) / 3.0;
  jet.gamma = tangent_project(j0.rho, gamma);
  return jet;
}

AccelNormRoutes accel_norm_sq_routes(const Matrix& h, const ProjectorState& rho0) {
  AccelNormRoutes r;
  const auto hm = moments(h, rho0, 4);
  const double h1 = hm[1], h2 = hm[2], h3 = hm[3], h4 = hm[4];
  r.moments = h4 - 4.0 * h3 * h1 - h2 * h2 + 8.0 * h2 * h1 * h1 - 4.0 * h1 * h1 * h1 * h1;

  const Matrix hs = adjoint_superop(h);
  const Matrix rs = adjoint_superop(rho0.matrix);
  const Matrix rr = density_superop(rho0);
  r.superop = 0.5 * (rr * hs * hs * rs * rs * hs * hs).trace().real();

  const Curve c = Curve::schroedinger(h, rho0);
  const auto d = ambient_derivatives(c, 0.0, 2);
  const Matrix alpha = tangent_project(rho0, d[1]);
  r.metric = metric_G(alpha, alpha);
  return r;
}

double accel_norm_sq(const Matrix& h, const ProjectorState& rho0) {
  const AccelNormRoutes r = accel_norm_sq_routes(h, rho0);
  const double scale = std::max(1.0, std::abs(r.moments));
  if (std::abs(r.moments - r.superop) > 1e-10 * scale ||
      std::abs(r.moments - r.metric) > 1e-10 * scale)
    throw std::runtime_error("accel_norm_sq: internal route disagreement");
  return r.moments;
}

double curvature(const Curve& c, double t) {
  if (c.kind() == Curve::Kind::Sampled)
    throw std::invalid_argument("curvature: constant-speed curves only");
  const CovariantJet j = covariant_jet(c, t);
  if (j.mu < 1e-12)
    throw std::domain_error("curvature: stationary state, undefined");
  return std::sqrt(metric_G(j.alpha, j.alpha) / j.mu);
}

}  // namespace spinphase
