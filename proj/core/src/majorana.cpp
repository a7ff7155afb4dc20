#include "spinphase/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinphase/brachistophase.hpp"

namespace spinphase {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

Complex poly_eval(const Vector& coeffs, const Complex& z) {
  Complex acc = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) acc = acc * z + coeffs[i];
  return acc;
}

Complex poly_deriv_eval(const Vector& coeffs, const Complex& z) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  Complex acc = 0.0;
  for (int i = 0; i < deg; ++i) acc = acc * z + double(deg - i) * coeffs[i];
  return acc;
}

}  // namespace

Vector majorana_polynomial(const PureState& psi) {
  const int n = psi.dimension() - 1;  // 2s
  Vector coeffs(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    coeffs[k] = sign * std::sqrt(binomial(n, k)) * psi.amplitudes[k];
  }
  return coeffs;
}

Eigen::Vector3d star_from_root(const Complex& zeta) {
  const double m2 = std::norm(zeta);
  return Eigen::Vector3d(2.0 * zeta.real(), 2.0 * zeta.imag(), 1.0 - m2) /
         (1.0 + m2);
}

MajoranaConstellation constellation(const PureState& psi) {
  const Vector coeffs = majorana_polynomial(psi);
  const int deg_full = static_cast<int>(coeffs.size()) - 1;
  const double scale = coeffs.cwiseAbs().maxCoeff();
  if (scale <= 0.0)
    throw std::domain_error("constellation: zero polynomial");

  // Leading zeros are roots at infinity, trailing zeros are exact zero roots.
  int lead = 0;
  while (lead <= deg_full && std::abs(coeffs[lead]) < 1e-13 * scale) ++lead;
  int tail = deg_full;
  while (tail >= lead && std::abs(coeffs[tail]) < 1e-13 * scale) --tail;

  MajoranaConstellation c;
  c.roots_at_infinity = lead;
  const int zero_roots = deg_full - tail;
  for (int i = 0; i < zero_roots; ++i) c.roots.push_back(Complex(0.0, 0.0));

  const int deg = tail - lead;
  if (deg > 0) {
    Vector p = coeffs.segment(lead, deg + 1) / coeffs[lead];  // monic
    Matrix companion = Matrix::Zero(deg, deg);
    for (int i = 0; i < deg - 1; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[deg - i];
    Eigen::ComplexEigenSolver<Matrix> es(companion);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("constellation: root finder failed");
    for (int i = 0; i < deg; ++i) {
      Complex z = es.eigenvalues()[i];
      const Complex dp = poly_deriv_eval(p, z);
      if (std::abs(dp) > 1e-8) z -= poly_eval(p, z) / dp;  // one Newton polish
      c.roots.push_back(z);
    }
  }

  for (const Complex& z : c.roots) c.stars.push_back(star_from_root(z));
  for (int i = 0; i < c.roots_at_infinity; ++i)
    c.stars.push_back(Eigen::Vector3d(0.0, 0.0, -1.0));
  return c;
}

PureState state_from_constellation(const MajoranaConstellation& c) {
  const int n = c.star_count();  // 2s
  const int deg = n - c.roots_at_infinity;
  // monic polynomial in the finite roots, shifted by the infinity deficiency
  Vector coeffs = Vector::Zero(n + 1);
  std::vector<Complex> poly = {1.0};
  for (int i = 0; i < deg; ++i) {
    poly.push_back(0.0);
    for (int j = static_cast<int>(poly.size()) - 1; j >= 1; --j)
      poly[j] -= c.roots[i] * poly[j - 1];
  }
  // coefficients of zeta^(deg-k) land at index lead + k
  for (int k = 0; k <= deg; ++k) coeffs[c.roots_at_infinity + k] = poly[k];

  Vector amps(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    amps[k] = coeffs[k] * sign / std::sqrt(binomial(n, k));
  }
  return PureState::normalized(amps);
}

namespace {

double star_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

// Greedy global-nearest matching; returns permutation p with B[p[i]] ~ A[i]
// and the largest matched step.
std::pair<std::vector<int>, double> greedy_match(
    const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
  const int m = static_cast<int>(a.size());
  std::vector<int> perm(m, -1);
  std::vector<bool> used(m, false);
  double worst = 0.0;
  for (int round = 0; round < m; ++round) {
    double best = 1e9;
    int bi = -1, bj = -1;
    for (int i = 0; i < m; ++i) {
      if (perm[i] >= 0) continue;
      for (int j = 0; j < m; ++j) {
        if (used[j]) continue;
        const double d = star_angle(a[i], b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    perm[bi] = bj;
    used[bj] = true;
    worst = std::max(worst, best);
  }
  return {perm, worst};
}

constexpr double kStepCap = 0.2;  // rad

struct Matcher {
  const Matrix* h;
  const PureState* psi0;
  int merge_events = 0;

  std::vector<Eigen::Vector3d> stars_at(double t) const {
    return constellation(evolve(*h, t, *psi0)).stars;
  }

  // permutation taking the constellation at ta to the one at tb
  std::vector<int> match(double ta, const std::vector<Eigen::Vector3d>& sa,
                         double tb, const std::vector<Eigen::Vector3d>& sb,
                         int depth) {
    auto [perm, worst] = greedy_match(sa, sb);
    if (worst <= kStepCap) return perm;
    if (depth >= 14) {
      ++merge_events;  // collision survived refinement; keep the greedy guess
      return perm;
    }
    const double tm = 0.5 * (ta + tb);
    const auto sm = stars_at(tm);
    const auto p1 = match(ta, sa, tm, sm, depth + 1);
    const auto p2 = match(tm, sm, tb, sb, depth + 1);
    std::vector<int> out(perm.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = p2[p1[i]];
    return out;
  }
};

}  // namespace

StarTrajectory trajectory(const Matrix& h, const PureState& psi0,
                          const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("trajectory: empty grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("trajectory: grid must increase");

  Matcher matcher{&h, &psi0};
  StarTrajectory out;
  out.times = grid;

  std::vector<Eigen::Vector3d> prev = matcher.stars_at(grid[0]);
  const int m = static_cast<int>(prev.size());
  out.tracks.assign(m, {});
  for (int i = 0; i < m; ++i) out.tracks[i].push_back(prev[i]);

  // track i currently points at constellation index cur[i]
  std::vector<int> cur(m);
  for (int i = 0; i < m; ++i) cur[i] = i;

  for (size_t k = 1; k < grid.size(); ++k) {
    const auto next = matcher.stars_at(grid[k]);
    const auto perm = matcher.match(grid[k - 1], prev, grid[k], next, 0);
    std::vector<int> ncur(m);
    for (int i = 0; i < m; ++i) {
      ncur[i] = perm[cur[i]];
      out.tracks[i].push_back(next[ncur[i]]);
    }
    cur = ncur;
    prev = next;
  }
  out.merge_events = matcher.merge_events;
  return out;
}

namespace {

// Normal of the least-squares plane through the points (via the centroid),
// oriented into the upper hemisphere.
Eigen::Vector3d fit_plane_normal(const std::vector<Eigen::Vector3d>& pts) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= double(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector3d d = p - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Eigen::Vector3d n = es.eigenvectors().col(0);  // smallest eigenvalue
  if (n.z() < 0) n = -n;
  return n;
}

double moving_star_tilt(const Matrix& h, const PureState& psi0,
                        const std::vector<double>& grid, double* residual_max,
                        double s) {
  std::vector<Eigen::Vector3d> pts;
  double worst = 0.0;
  for (double t : grid) {
    const PureState psi = evolve(h, t, psi0);
    const MajoranaConstellation c = constellation(psi);
    // the single moving root is the one of largest modulus
    int imax = -1;
    double best = -1.0;
    for (size_t i = 0; i < c.roots.size(); ++i)
      if (std::abs(c.roots[i]) > best) {
        best = std::abs(c.roots[i]);
        imax = static_cast<int>(i);
      }
    if (imax < 0) throw std::domain_error("falling_star_audit: no finite root");
    const Complex zeta = c.roots[imax];
    if (residual_max) {
      const double r = std::abs(std::abs(zeta - std::sqrt(s)) - std::sqrt(s));
      worst = std::max(worst, r);
    }
    pts.push_back(star_from_root(zeta));
  }
  if (residual_max) *residual_max = worst;
  const Eigen::Vector3d n = fit_plane_normal(pts);
  return std::acos(std::clamp(n.z(), -1.0, 1.0));
}

}  // namespace

FallingStarReport falling_star_audit(double s, const std::vector<double>& grid) {
  const double two_s = 2.0 * s;
  if (std::abs(two_s - std::round(two_s)) > 1e-12 || s < 0.5)
    throw std::invalid_argument("falling_star_audit: s must be a half-integer >= 1/2");
  for (double t : grid) {
    const double m = std::fmod(std::abs(t), std::numbers::pi);
    if (m < 1e-6 || std::numbers::pi - m < 1e-6)
      throw std::invalid_argument("falling_star_audit: grid hits t = 0 mod pi");
  }
  const int n = static_cast<int>(std::lround(two_s)) + 1;
  const PureState e0 = coherent_state(n);
  const ProjectorState rho0 = ProjectorState::from_ket(e0);

  FallingStarReport rep;
  rep.s = s;
  rep.tilt_expected = std::atan(2.0 * std::sqrt(s));
  rep.tilt_max_accel_expected = std::atan(std::sqrt(2.0 * s));

  // The sign choice with +1/sqrt(3) in the top corner traces the circle
  // centered at +sqrt(s); the other sign gives the mirror circle at -sqrt(s).
  const Matrix h_bra = brachistophase_hamiltonian(rho0, -1).H_canonical;
  rep.tilt = moving_star_tilt(h_bra, e0, grid, &rep.circle_residual_max, s);

  const Matrix h_acc = max_accel_hamiltonian(rho0, +1).H_canonical;
  rep.tilt_max_accel = moving_star_tilt(h_acc, e0, grid, nullptr, s);
  rep.max_accel_tilt_greater = rep.tilt_max_accel > rep.tilt;
  return rep;
}

std::vector<Matrix> spin_operators(double s) {
  const int n = static_cast<int>(std::lround(2.0 * s)) + 1;
  Matrix jz = Matrix::Zero(n, n);
  Matrix jp = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = s - k;
    jz(k, k) = m;
    if (k >= 1) {
      // <s, m+1 | J+ | s, m> with m = s - k
      jp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
  }
  const Matrix jm = jp.adjoint();
  std::vector<Matrix> out;
  out.push_back(0.5 * (jp + jm));
  out.push_back(Complex(0.0, -0.5) * (jp - jm));
  out.push_back(jz);
  return out;
}

}  // namespace spinphase
