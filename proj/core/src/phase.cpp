#include "spinphase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "detail/power_series.hpp"

namespace spinphase {

namespace {

constexpr double kBreakdownFloor = 1e-10;

double principal(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

struct OdeRun {
  std::vector<double> times;
  std::vector<double> phase;
  std::vector<int> flagged;
  Matrix f_final;
};

OdeRun integrate(const Curve& c, double t_end, int steps) {
  const int n = c.dimension();
  const Matrix rho0 = c.at(0.0).matrix;
  Matrix f = Matrix::Identity(n, n);
  const double h = t_end / steps;

  OdeRun run;
  run.times.reserve(steps + 1);
  run.phase.reserve(steps + 1);
  run.times.push_back(0.0);
  run.phase.push_back(0.0);

  double prev = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Matrix d1 = c.derivative(t);
    const Matrix dm = c.derivative(t + 0.5 * h);
    const Matrix d2 = c.derivative(t + h);
    const Matrix k1 = d1 * f;
    const Matrix k2 = dm * (f + 0.5 * h * k1);
    const Matrix k3 = dm * (f + 0.5 * h * k2);
    const Matrix k4 = d2 * (f + h * k3);
    f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Complex z = (rho0 * f).trace();
    run.times.push_back((k + 1) * h);
    if (std::abs(z) < kBreakdownFloor) {
      run.flagged.push_back(k + 1);
      run.phase.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      const double ph = prev + principal(std::arg(z) - prev);
      run.phase.push_back(ph);
      prev = ph;
    }
  }
  run.f_final = f;
  return run;
}

}  // namespace

PhaseTrace geometric_phase(const Curve& c, double t_end, int steps) {
  if (steps < 16) throw std::invalid_argument("geometric_phase: steps must be >= 16");
  const OdeRun fine = integrate(c, t_end, 2 * steps);
  const OdeRun coarse = integrate(c, t_end, steps);

  PhaseTrace trace;
  trace.method = "ode";
  trace.F_final = fine.f_final;
  trace.times.reserve(steps + 1);
  trace.phase.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    trace.times.push_back(fine.times[2 * k]);
    trace.phase.push_back(fine.phase[2 * k]);
  }
  for (int idx : fine.flagged) {
    const int node = (idx + 1) / 2;  // nearest reported node
    if (trace.flagged.empty() || trace.flagged.back() != node)
      trace.flagged.push_back(node);
  }
  const double a = fine.phase.back();
  const double b = coarse.phase.back();
  trace.converged = std::isfinite(a) && std::isfinite(b) && std::abs(a - b) < 1e-8;
  return trace;
}

double geometric_phase_value(const Curve& c, double t_end, int steps) {
  return geometric_phase(c, t_end, steps).phase.back();
}

double bargmann_phase(const std::vector<PureState>& states, bool close) {
  if (states.size() < 2)
    throw std::invalid_argument("bargmann_phase: need at least two states");
  double acc = 0.0;
  auto factor = [&](const PureState& to, const PureState& from) {
    const Complex ov = to.overlap(from);  // <to|from>
    if (std::abs(ov) < 1e-14)
      throw std::domain_error("bargmann_phase: vanishing overlap in chain");
    acc += std::arg(ov);
  };
  for (size_t k = 0; k + 1 < states.size(); ++k) factor(states[k + 1], states[k]);
  if (!close) factor(states.front(), states.back());
  return acc;
}

PhaseTrace bargmann_phase_trace(const Curve& c, double t_end, int nodes) {
  if (nodes < 2) throw std::invalid_argument("bargmann_phase_trace: nodes >= 2");
  PhaseTrace trace;
  trace.method = "bargmann";
  trace.times.reserve(nodes + 1);
  trace.phase.reserve(nodes + 1);
  trace.times.push_back(0.0);
  trace.phase.push_back(0.0);

  // running open-path sum plus the per-node geodesic closure factor
  const PureState first = c.at(0.0).ket();
  PureState prev = first;
  double open_sum = 0.0;
  for (int k = 1; k <= nodes; ++k) {
    const double t = t_end * k / nodes;
    const PureState cur = c.at(t).ket();
    const Complex leg = cur.overlap(prev);
    const Complex wrap = first.overlap(cur);
    if (std::abs(leg) < 1e-14 || std::abs(wrap) < 1e-14)
      throw std::domain_error("bargmann_phase_trace: vanishing overlap");
    open_sum += std::arg(leg);
    trace.times.push_back(t);
    trace.phase.push_back(open_sum + std::arg(wrap));
    prev = cur;
  }
  trace.F_final = Matrix();
  trace.converged = true;
  return trace;
}

PhaseDerivatives phase_derivs_covariant(const CovariantJet& jet) {
  PhaseDerivatives d;
  d.max_order = 5;
  const ProjectorState& rho = jet.rho;
  d.d3 = symplectic_omega(rho, jet.alpha, jet.v);
  d.d4 = 2.0 * symplectic_omega(rho, jet.beta, jet.v);
  d.d5 = 3.0 * symplectic_omega(rho, jet.gamma, jet.v) +
         2.0 * symplectic_omega(rho, jet.beta, jet.alpha) +
         8.0 * metric_G(jet.v, jet.v) * symplectic_omega(rho, jet.alpha, jet.v);
  return d;
}

double schrodinger_d3(const Matrix& h, const ProjectorState& rho0) {
  const Matrix h2 = h * h;
  const double m1 = (rho0.matrix * h).trace().real();
  const double m2 = (rho0.matrix * h2).trace().real();
  const double m3 = (rho0.matrix * h2 * h).trace().real();
  return m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1;
}

namespace {

// Representative of rho_t re-phased against psi0; also reports L.
struct Rephased {
  Vector psi;
  double cosL = 0.0;
};

Rephased rephased_rep(const Curve& c, const Vector& psi0, double t) {
  Rephased r;
  Vector raw = c.at(t).ket().amplitudes;
  const Complex ov = psi0.dot(raw);
  if (std::abs(ov) < 1e-14)
    throw std::domain_error("geodesic_frame: rho_t orthogonal to rho_0");
  r.psi = raw * (std::conj(ov) / std::abs(ov));
  r.cosL = std::min(1.0, std::abs(ov));
  return r;
}

Vector xi_at(const Curve& c, const Vector& psi0, double t) {
  const Rephased r = rephased_rep(c, psi0, t);
  const double sinL = std::sqrt(std::max(0.0, 1.0 - r.cosL * r.cosL));
  if (sinL < 1e-14)
    throw std::domain_error("geodesic_frame: L too small, xi undefined");
  return (r.psi - r.cosL * psi0) / sinL;
}

Matrix chi_of(const Vector& xi, const Vector& psi0) {
  return Complex(0.0, 1.0) * (xi * psi0.adjoint() - psi0 * xi.adjoint());
}

Matrix u_closed(const Matrix& chi, double angle, int n) {
  return Matrix::Identity(n, n) - Complex(0.0, std::sin(angle)) * chi -
         (1.0 - std::cos(angle)) * (chi * chi);
}

}  // namespace

Matrix GeodesicFrame::U(double s) const {
  return u_closed(chi, s * L, static_cast<int>(chi.rows()));
}

GeodesicFrame geodesic_frame(const Curve& c, double t) {
  GeodesicFrame f;
  f.t = t;
  f.psi0 = c.at(0.0).ket();
  const Vector& psi0 = f.psi0.amplitudes;

  const Rephased r = rephased_rep(c, psi0, t);
  f.L = std::acos(std::clamp(r.cosL, -1.0, 1.0));
  if (!(f.L > 1e-12 && f.L < std::numbers::pi / 2.0 - 1e-12))
    throw std::domain_error("geodesic_frame: L outside (0, pi/2)");

  const Vector xi = xi_at(c, psi0, t);
  f.xi = PureState::normalized(xi);
  f.chi = chi_of(xi, psi0);
  f.Y = f.L * f.chi;
  f.Y_tilde = std::sin(f.L) * f.chi;

  // b = <xi | xid> by re-phased central differences, Richardson once.
  const double h = 1e-4;
  auto diff = [&](double step) {
    const Vector xp = xi_at(c, psi0, t + step);
    const Vector xm = xi_at(c, psi0, t - step);
    return Vector(((xp - xm) / (2.0 * step)).eval());
  };
  const Vector d1 = diff(h);
  const Vector d2 = diff(0.5 * h);
  const Vector xid = (4.0 * d2 - d1) / 3.0;
  f.b = xi.dot(xid);
  return f;
}

namespace {

Matrix frame_u_at(const Curve& c, const Vector& psi0, double t, double s) {
  const Rephased r = rephased_rep(c, psi0, t);
  const double L = std::acos(std::clamp(r.cosL, -1.0, 1.0));
  const Vector xi = xi_at(c, psi0, t);
  return u_closed(chi_of(xi, psi0), s * L, static_cast<int>(psi0.size()));
}

}  // namespace

Matrix frame_X(const Curve& c, double t, double s) {
  const Vector psi0 = c.at(0.0).ket().amplitudes;
  const Matrix u = frame_u_at(c, psi0, t, s);
  const double h = 1e-4;
  auto dot_u = [&](double step) {
    return Matrix((frame_u_at(c, psi0, t + step, s) -
                   frame_u_at(c, psi0, t - step, s)) /
                  (2.0 * step));
  };
  const Matrix d1 = dot_u(h);
  const Matrix d2 = dot_u(0.5 * h);
  const Matrix ud = (4.0 * d2 - d1) / 3.0;
  return Complex(0.0, 1.0) * (u.adjoint() * ud);
}

Matrix frame_X_hat(const Curve& c, double t, double s) {
  const Vector psi0 = c.at(0.0).ket().amplitudes;
  const Matrix u = frame_u_at(c, psi0, t, s);
  const double h = 1e-4;
  auto dot_u = [&](double step) {
    return Matrix((frame_u_at(c, psi0, t + step, s) -
                   frame_u_at(c, psi0, t - step, s)) /
                  (2.0 * step));
  };
  const Matrix d1 = dot_u(h);
  const Matrix d2 = dot_u(0.5 * h);
  const Matrix ud = (4.0 * d2 - d1) / 3.0;
  return Complex(0.0, 1.0) * (ud * u.adjoint());
}

double frame_phase_rate(const GeodesicFrame& f) {
  const double s = std::sin(f.L);
  return (Complex(0.0, 1.0) * f.b).real() * s * s;
}

namespace {

using detail::ScalarSeries;
using detail::VectorSeries;

// arcsin(y)/y as a series in y^2: coefficients (2k)! / (4^k (k!)^2 (2k+1)).
std::vector<double> arcsin_over_y_coeffs(int terms) {
  std::vector<double> out(terms);
  double c = 1.0;  // (2k)! / (4^k (k!)^2) at k = 0
  for (int k = 0; k < terms; ++k) {
    out[k] = c / (2 * k + 1);
    c *= (2.0 * k + 1.0) / (2.0 * k + 2.0);
  }
  return out;
}

VTildeExpansion vtilde_series(const std::vector<Vector>& ket_coeffs,
                              int max_order) {
  const int ord = max_order + 3;
  const int dim = static_cast<int>(ket_coeffs[0].size());

  VectorSeries raw(ord, dim);
  for (int k = 0; k <= ord && k < static_cast<int>(ket_coeffs.size()); ++k)
    raw.c[k] = ket_coeffs[k];

  // normalize the lift in-series: psi = raw / |raw|
  ScalarSeries nrm2 = detail::inner(raw, raw);
  for (auto& z : nrm2.c) z = Complex(z.real(), 0.0);
  VectorSeries psi = detail::scale(raw, detail::inverse(detail::sqrt(nrm2)));
  const Vector psi0 = psi.c[0];

  ScalarSeries ov = detail::inner(psi0, psi);            // <psi0|psi(t)>
  ScalarSeries ovb = detail::conjugate(ov);
  ScalarSeries a = detail::mul(ov, ovb);                 // |<psi0|psi>|^2
  for (auto& z : a.c) z = Complex(z.real(), 0.0);
  ScalarSeries cosL = detail::sqrt(a);
  ScalarSeries u = detail::mul(ovb, detail::inverse(cosL));  // phase fix
  VectorSeries psihat = detail::scale(psi, u);

  // eta = psihat - cosL psi0 = sin(L) xi
  VectorSeries eta = psihat;
  for (int k = 0; k <= ord; ++k) eta.c[k] -= cosL.c[k] * psi0;

  // L / sin L as a series in sin^2 L = 1 - a
  ScalarSeries x = detail::sub(detail::constant(1.0, ord), a);
  const auto poly = arcsin_over_y_coeffs(ord / 2 + 1);
  ScalarSeries pref = detail::compose_poly(poly, x);

  VectorSeries eta_s = detail::scale(eta, pref);

  VTildeExpansion e;
  e.rho0 = ProjectorState(psi0 * psi0.adjoint());
  e.vtilde.reserve(max_order + 1);
  double fact = 1.0;  // (m+1)!
  for (int m = 0; m <= max_order; ++m) {
    fact *= (m + 1);
    const Vector& w = eta_s.c[m + 1];
    e.vtilde.push_back(fact * (w * psi0.adjoint() + psi0 * w.adjoint()));
  }
  return e;
}

VTildeExpansion vtilde_fit(const Curve& c, int max_order) {
  // Frozen grid and degree; see the module notes on determinism.
  const std::vector<double> grid = {0.02, 0.04, 0.06, 0.08, 0.10, 0.12};
  const int unknowns = max_order + 1;
  if (unknowns > static_cast<int>(grid.size()))
    throw std::invalid_argument("vtilde_expansion: grid too coarse for requested order");

  const ProjectorState rho0 = c.at(0.0);
  const int n = c.dimension();

  Eigen::MatrixXd design(grid.size(), unknowns);
  std::vector<Matrix> w_samples;
  for (size_t i = 0; i < grid.size(); ++i) {
    const GeodesicFrame f = geodesic_frame(c, grid[i]);
    w_samples.push_back(-complex_structure(rho0, f.Y));
    for (int m = 0; m < unknowns; ++m)
      design(i, m) = std::pow(grid[i], m + 1);
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < unknowns)
    throw std::runtime_error("vtilde_expansion: rank-deficient fit");

  std::vector<Matrix> coeff(unknowns, Matrix::Zero(n, n));
  Eigen::VectorXd rhs(grid.size());
  for (int r = 0; r < n; ++r)
    for (int cidx = 0; cidx < n; ++cidx) {
      for (size_t i = 0; i < grid.size(); ++i) rhs[i] = w_samples[i](r, cidx).real();
      Eigen::VectorXd sol_re = qr.solve(rhs);
      for (size_t i = 0; i < grid.size(); ++i) rhs[i] = w_samples[i](r, cidx).imag();
      Eigen::VectorXd sol_im = qr.solve(rhs);
      for (int m = 0; m < unknowns; ++m)
        coeff[m](r, cidx) = Complex(sol_re[m], sol_im[m]);
    }

  VTildeExpansion e;
  e.rho0 = rho0;
  double fact = 1.0;
  for (int m = 0; m < unknowns; ++m) {
    fact *= (m + 1);
    e.vtilde.push_back(fact * coeff[m]);
  }
  return e;
}

}  // namespace

VTildeExpansion vtilde_expansion(const Curve& c, int max_order) {
  if (max_order < 0 || max_order > 4)
    throw std::invalid_argument("vtilde_expansion: order must be 0..4");
  const auto taylor = c.ket_taylor(max_order + 3);
  if (taylor.has_value()) return vtilde_series(*taylor, max_order);
  return vtilde_fit(c, max_order);
}

VTildeExpansion vtilde_from_taylor(const std::vector<Vector>& ket_coeffs,
                                   int max_order) {
  if (max_order < 0 || max_order > 4)
    throw std::invalid_argument("vtilde_from_taylor: order must be 0..4");
  if (ket_coeffs.empty())
    throw std::invalid_argument("vtilde_from_taylor: empty coefficient list");
  return vtilde_series(ket_coeffs, max_order);
}

PhaseDerivatives phase_derivs_vtilde(const VTildeExpansion& e) {
  PhaseDerivatives d;
  const ProjectorState& rho = e.rho0;
  const auto& v = e.vtilde;
  const int k = static_cast<int>(v.size()) - 1;  // highest available order
  d.max_order = 2;
  d.d1 = 0.0;
  d.d2 = 0.0;
  if (k >= 1) {
    d.d3 = symplectic_omega(rho, v[1], v[0]);
    d.max_order = 3;
  }
  if (k >= 2) {
    d.d4 = 2.0 * symplectic_omega(rho, v[2], v[0]);
    d.max_order = 4;
  }
  if (k >= 3) {
    d.d5 = 3.0 * symplectic_omega(rho, v[3], v[0]) +
           2.0 * symplectic_omega(rho, v[2], v[1]) -
           4.0 * metric_G(v[0], v[0]) * symplectic_omega(rho, v[1], v[0]);
    d.max_order = 5;
  }
  if (k >= 4) {
    d.d6 = 4.0 * symplectic_omega(rho, v[4], v[0]) +
           5.0 * symplectic_omega(rho, v[3], v[1]) -
           (40.0 / 3.0) * metric_G(v[0], v[0]) * symplectic_omega(rho, v[2], v[0]) -
           20.0 * metric_G(v[1], v[0]) * symplectic_omega(rho, v[1], v[0]);
    d.max_order = 6;
  }
  return d;
}

}  // namespace spinphase
