// Command-line surface: phase traces, brachistophase optimization reports,
// Majorana constellation trajectories, and the cross-module invariant suite.
// Exit codes: 0 ok, 1 invariant failure, 2 config error, 3 numerical
// breakdown.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "spinphase/brachistophase.hpp"
#include "spinphase/majorana.hpp"
#include "spinphase/phase.hpp"

using json = nlohmann::ordered_json;
using namespace spinphase;

namespace {

constexpr int kFormatVersion = 1;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct GridSpec {
  double start = 0.0;
  double end = 1.0;
  int nodes = 0;

  std::vector<double> values() const {
    std::vector<double> out;
    if (nodes == 1) {
      out.push_back(start);
      return out;
    }
    for (int k = 0; k < nodes; ++k)
      out.push_back(start + (end - start) * k / (nodes - 1));
    return out;
  }
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  const auto p1 = text.find(':');
  const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw CLI::ValidationError("--grid: expected start:end:nodes");
  try {
    g.start = std::stod(text.substr(0, p1));
    g.end = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    g.nodes = std::stoi(text.substr(p2 + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--grid: expected start:end:nodes");
  }
  if (g.nodes < 1) throw CLI::ValidationError("--grid: need at least one node");
  if (g.nodes > 1 && g.end <= g.start)
    throw CLI::ValidationError("--grid: end must exceed start");
  return g;
}

double parse_spin(const std::string& text) {
  const auto slash = text.find('/');
  double s = 0.0;
  try {
    if (slash == std::string::npos) {
      s = std::stod(text);
    } else {
      s = std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--spin: expected a half-integer like 3/2");
  }
  const double twice = 2.0 * s;
  if (s < 0.5 || std::abs(twice - std::round(twice)) > 1e-9)
    throw CLI::ValidationError("--spin: expected a half-integer >= 1/2");
  return s;
}

struct RunConfig {
  std::string command;
  double spin = 0.5;
  std::string state = "coherent";
  std::string hamiltonian = "brachistophase";
  double tau = 0.5;
  GridSpec grid{0.0, 3.2, 33};
  int steps = 256;
  int samples = 10000;
  std::uint64_t seed = 20240915;
  int order = 3;
  int sign = +1;
  std::string out;
  std::string format = "json";
  std::string inject;

  json echo() const {
    json j;
    j["command"] = command;
    j["spin"] = spin;
    j["state"] = state;
    j["hamiltonian"] = hamiltonian;
    j["tau"] = tau;
    j["grid"] = {{"start", grid.start}, {"end", grid.end}, {"nodes", grid.nodes}};
    j["steps"] = steps;
    j["samples"] = samples;
    j["seed"] = seed;
    j["order"] = order;
    j["sign"] = sign == 1 ? "+" : "-";
    j["format"] = format;
    return j;
  }
};

Vector load_complex_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file " + path);
  json j;
  in >> j;
  Vector v(j.size());
  for (size_t k = 0; k < j.size(); ++k)
    v[k] = Complex(j[k][0].get<double>(), j[k][1].get<double>());
  return v;
}

Matrix load_complex_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hamiltonian file " + path);
  json j;
  in >> j;
  const size_t n = j.size();
  Matrix m(n, n);
  for (size_t r = 0; r < n; ++r) {
    if (j[r].size() != n) throw std::runtime_error("hamiltonian file not square");
    for (size_t c = 0; c < n; ++c)
      m(r, c) = Complex(j[r][c][0].get<double>(), j[r][c][1].get<double>());
  }
  if (!is_hermitian(m))
    throw std::runtime_error("hamiltonian file is not hermitian");
  return m;
}

json complex_matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

PureState resolve_state(RunConfig& cfg) {
  if (cfg.state == "coherent")
    return coherent_state(static_cast<int>(std::lround(2 * cfg.spin)) + 1);
  if (cfg.state == "ghz") {
    cfg.spin = 1.5;
    return ghz_state();
  }
  if (cfg.state == "tetrahedral") {
    cfg.spin = 2.0;
    return tetrahedral_state();
  }
  const PureState psi = PureState::normalized(load_complex_vector(cfg.state));
  cfg.spin = psi.spin();
  return psi;
}

Matrix resolve_hamiltonian(const RunConfig& cfg, const PureState& psi) {
  const ProjectorState rho0 = ProjectorState::from_ket(psi);
  const int n = psi.dimension();
  if (cfg.hamiltonian == "brachistophase")
    return brachistophase_hamiltonian(rho0, cfg.sign).H_transported;
  if (cfg.hamiltonian == "maxaccel")
    return max_accel_hamiltonian(rho0, cfg.sign).H_transported;
  if (cfg.hamiltonian == "geodesic") {
    // generator of a geodesic through rho0, toward the basis direction the
    // state overlaps least
    int jmin = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(psi.amplitudes[k]) < std::abs(psi.amplitudes[jmin])) jmin = k;
    Vector e = Vector::Zero(n);
    e[jmin] = 1.0;
    Vector xi = e - psi.amplitudes * psi.amplitudes.dot(e);
    xi /= xi.norm();
    return Complex(0, 1) *
           (xi * psi.amplitudes.adjoint() - psi.amplitudes * xi.adjoint());
  }
  if (cfg.hamiltonian == "random") {
    Rng rng(cfg.seed);
    return constraint_project(random_hermitian(n, rng));
  }
  const Matrix m = load_complex_matrix(cfg.hamiltonian);
  if (m.rows() != n)
    throw std::runtime_error("hamiltonian dimension does not match the state");
  return m;
}

void write_output(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + cfg.out);
  out << payload;
}

// ---------------------------------------------------------------------------

int cmd_phase(RunConfig cfg) {
  const PureState psi = resolve_state(cfg);
  const ProjectorState rho0 = ProjectorState::from_ket(psi);
  const Matrix h = resolve_hamiltonian(cfg, psi);
  const Curve curve = Curve::schroedinger(h, rho0);

  const auto ts = cfg.grid.values();
  std::vector<double> exact(ts.size(), 0.0), t3(ts.size()), t5(ts.size());
  bool breakdown = false;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] != 0.0) {
      const PhaseTrace tr = geometric_phase(curve, ts[i], cfg.steps);
      exact[i] = tr.phase.back();
      if (!tr.flagged.empty() || !std::isfinite(exact[i])) breakdown = true;
    }
    t3[i] = taylor_phase(h, rho0, std::abs(ts[i]), 3) *
            (ts[i] < 0 ? -1.0 : 1.0);
    t5[i] = taylor_phase(h, rho0, std::abs(ts[i]), 5) *
            (ts[i] < 0 ? -1.0 : 1.0);
  }

  std::string payload;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "t,phase_exact,phase_taylor3,phase_taylor5\n";
    for (size_t i = 0; i < ts.size(); ++i)
      os << fmt17(ts[i]) << ',' << fmt17(exact[i]) << ',' << fmt17(t3[i]) << ','
         << fmt17(t5[i]) << '\n';
    payload = os.str();
  } else {
    const PhaseDerivatives d = phase_derivs_vtilde(vtilde_expansion(curve, 4));
    json j;
    j["format"] = kFormatVersion;
    j["config"] = cfg.echo();
    j["derivatives"] = {{"d3", d.d3}, {"d4", d.d4}, {"d5", d.d5}, {"d6", d.d6}};
    json rows = json::array();
    for (size_t i = 0; i < ts.size(); ++i)
      rows.push_back({{"t", ts[i]},
                      {"phase_exact", exact[i]},
                      {"phase_taylor3", t3[i]},
                      {"phase_taylor5", t5[i]}});
    j["trace"] = rows;
    payload = j.dump(2) + "\n";
  }
  write_output(cfg, payload);
  return breakdown ? 3 : 0;
}

int cmd_optimize(RunConfig cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const PureState psi = resolve_state(cfg);
  const ProjectorState rho0 = ProjectorState::from_ket(psi);

  const OptimalSolution sol = brachistophase_hamiltonian(rho0, cfg.sign);
  const Curve curve = Curve::schroedinger(sol.H_transported, rho0);
  const double analytic_phi = geometric_phase_value(curve, cfg.tau, cfg.steps);
  const auto tau0 = tau0_threshold(sol.H_transported, rho0);

  const RandomSearchResult rs =
      random_search(rho0, cfg.tau, cfg.samples, cfg.seed, cfg.steps, 0);
  const auto t1 = std::chrono::steady_clock::now();

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "sample,phi\n";
    for (size_t i = 0; i < rs.phi_trace.size(); ++i)
      os << i << ',' << fmt17(rs.phi_trace[i]) << '\n';
    write_output(cfg, os.str());
    return 0;
  }

  json j;
  j["format"] = kFormatVersion;
  j["config"] = cfg.echo();
  j["analytic"] = {
      {"H_canonical", complex_matrix_json(sol.H_canonical)},
      {"H_transported", complex_matrix_json(sol.H_transported)},
      {"transport_U", complex_matrix_json(sol.transport_U)},
      {"objective_d3", sol.objective},
      {"phi_at_tau", analytic_phi},
      {"taylor_order", cfg.order},
      {"taylor_at_tau", taylor_phase(sol.H_transported, rho0, cfg.tau, cfg.order)},
  };
  if (tau0.has_value())
    j["analytic"]["tau0"] = *tau0;
  else
    j["analytic"]["tau0"] = nullptr;
  j["random_search"] = {
      {"samples", rs.samples},
      {"seed", rs.seed},
      {"best_phi", rs.best_phi},
      {"best_index", rs.best_index},
      {"best_H", complex_matrix_json(rs.best_h)},
  };
  j["meta"] = {{"wall_time_ms",
                std::chrono::duration<double, std::milli>(t1 - t0).count()}};
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_constellation(RunConfig cfg) {
  const PureState psi = resolve_state(cfg);
  const Matrix h = resolve_hamiltonian(cfg, psi);
  const auto grid = cfg.grid.values();
  const StarTrajectory tr = trajectory(h, psi, grid);

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "t";
    for (size_t s = 0; s < tr.tracks.size(); ++s)
      os << ",star" << s << "_x,star" << s << "_y,star" << s << "_z";
    os << '\n';
    for (size_t k = 0; k < tr.times.size(); ++k) {
      os << fmt17(tr.times[k]);
      for (const auto& track : tr.tracks)
        os << ',' << fmt17(track[k].x()) << ',' << fmt17(track[k].y()) << ','
           << fmt17(track[k].z());
      os << '\n';
    }
    write_output(cfg, os.str());
    return 0;
  }

  json j;
  j["format"] = kFormatVersion;
  j["config"] = cfg.echo();
  j["times"] = tr.times;
  json tracks = json::array();
  for (const auto& track : tr.tracks) {
    json pts = json::array();
    for (const auto& p : track) pts.push_back({p.x(), p.y(), p.z()});
    tracks.push_back(pts);
  }
  j["tracks"] = tracks;
  j["merge_events"] = tr.merge_events;

  // whether the final frame is the initial constellation up to a relabeling
  // of the stars (tracks may end on permuted partners)
  {
    std::vector<Eigen::Vector3d> first, last;
    for (const auto& track : tr.tracks) {
      first.push_back(track.front());
      last.push_back(track.back());
    }
    double worst = 0.0;
    std::vector<bool> used(last.size(), false);
    for (const auto& p : first) {
      double best = 1e9;
      size_t bi = 0;
      for (size_t i = 0; i < last.size(); ++i) {
        if (used[i]) continue;
        const double d = (p - last[i]).norm();
        if (d < best) {
          best = d;
          bi = i;
        }
      }
      used[bi] = true;
      worst = std::max(worst, best);
    }
    j["final_permutation_of_initial"] = worst < 1e-6;
  }

  if (cfg.state == "coherent") {
    // audit on the grid nodes that avoid t = 0 mod pi
    std::vector<double> safe;
    for (double t : grid) {
      const double m = std::fmod(std::abs(t), std::numbers::pi);
      if (m > 1e-3 && std::numbers::pi - m > 1e-3) safe.push_back(t);
    }
    if (safe.size() >= 3) {
      const FallingStarReport rep = falling_star_audit(cfg.spin, safe);
      j["falling_star"] = {
          {"circle_residual_max", rep.circle_residual_max},
          {"tilt", rep.tilt},
          {"tilt_expected", rep.tilt_expected},
          {"tilt_max_accel", rep.tilt_max_accel},
          {"tilt_max_accel_expected", rep.tilt_max_accel_expected},
          {"max_accel_tilt_greater", rep.max_accel_tilt_greater},
      };
    }
  }
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

// --- verify ----------------------------------------------------------------

struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass() const { return residual <= tol; }
};

// holomorphic continuation of the chart metric for the curvature oracle
Matrix g_continued(const Vector& z, const Vector& w) {
  const int n = static_cast<int>(z.size());
  Complex delta = 1.0;
  for (int i = 0; i < n; ++i) delta += z[i] * w[i];
  Matrix g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g(a, b) = 0.5 / (delta * delta) *
                (delta * ((a == b) ? 1.0 : 0.0) - z[b] * w[a]);
  return g;
}

double curvature_check(int n, Rng& rng, bool inject) {
  Vector z(n);
  for (int i = 0; i < n; ++i)
    z[i] = 0.5 * Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
  const ChartPoint p{z};
  const Vector w0 = z.conjugate();
  const double h = 1e-4;

  auto gamma_at = [&](const Vector& w) {
    const Matrix g = g_continued(z, w);
    const Matrix ginv = g.inverse().transpose();
    std::vector<Matrix> gam(n, Matrix::Zero(n, n));
    for (int a = 0; a < n; ++a) {
      auto at = [&](double step) {
        Vector zz = z;
        zz[a] += step;
        return Matrix(g_continued(zz, w));
      };
      const Matrix d1 = (at(h) - at(-h)) / (2 * h);
      const Matrix d2 = (at(h / 2) - at(-h / 2)) / h;
      const Matrix dg = (4.0 * d2 - d1) / 3.0;
      for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) {
          Complex acc = 0.0;
          for (int r = 0; r < n; ++r) acc += ginv(c, r) * dg(b, r);
          gam[c](a, b) = acc;
        }
    }
    return gam;
  };

  const RiemannTensor r = riemann(p);
  const Matrix g = g_continued(z, w0);
  const double scale = inject ? 1.0 + 1e-3 : 1.0;
  double worst = 0.0;
  for (int bbar = 0; bbar < n; ++bbar) {
    auto gam_shift = [&](double step) {
      Vector w = w0;
      w[bbar] += step;
      const auto gam = gamma_at(w);
      Matrix stacked(n * n, n);
      for (int c = 0; c < n; ++c) stacked.block(c * n, 0, n, n) = gam[c];
      return stacked;
    };
    const Matrix d1 = (gam_shift(h) - gam_shift(-h)) / (2 * h);
    const Matrix d2 = (gam_shift(h / 2) - gam_shift(-h / 2)) / h;
    const Matrix dgam = (4.0 * d2 - d1) / 3.0;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int dbar = 0; dbar < n; ++dbar) {
          Complex acc = 0.0;
          for (int e = 0; e < n; ++e) acc += -dgam(e * n + a, c) * g(e, dbar);
          worst = std::max(worst,
                           std::abs(acc - scale * r(a, bbar, c, dbar)));
        }
  }
  return worst;
}

int cmd_verify(RunConfig cfg) {
  const int n = static_cast<int>(std::lround(2 * cfg.spin)) + 1;
  std::vector<Check> checks;
  Rng rng(cfg.seed);
  const bool inject = cfg.inject == "perturb-christoffel";

  {  // superoperator identities
    double worst_idem = 0, worst_sq = 0, worst_odd = 0, worst_par = 0;
    for (int trial = 0; trial < 5; ++trial) {
      const ProjectorState rho = ProjectorState::from_ket(random_state(n, rng));
      const Matrix pp = projector_superop(rho);
      const Matrix rr = adjoint_superop(rho.matrix);
      worst_idem = std::max(worst_idem, max_abs(pp * pp - pp));
      worst_sq = std::max(worst_sq, max_abs(pp - rr * rr));
      const Matrix a = random_hermitian(n, rng);
      const Matrix rhot = Matrix::Identity(n, n) - rho.matrix;
      const Matrix odd = rho.matrix * a * rhot + rhot * a * rho.matrix;
      worst_odd = std::max(worst_odd,
                           (pp * vec_row(a) - vec_row(odd)).cwiseAbs().maxCoeff());
      const Matrix b = normal_project(rho, random_hermitian(n, rng));
      worst_par = std::max(
          worst_par, std::abs((tangent_project(rho, a) * b).trace()));
    }
    checks.push_back({"superop_projector_idempotent", worst_idem, 1e-10});
    checks.push_back({"superop_equals_squared_adjoint", worst_sq, 1e-10});
    checks.push_back({"odd_projection_sandwich", worst_odd, 1e-10});
    checks.push_back({"parity_trace_orthogonality", worst_par, 1e-10});
  }
  {  // evolution preserves overlaps
    double worst = 0;
    const Matrix h = random_hermitian(n, rng);
    const PureState a = random_state(n, rng), b = random_state(n, rng);
    const double before = std::abs(a.amplitudes.dot(b.amplitudes));
    const double after =
        std::abs(evolve(h, 1.1, a).amplitudes.dot(evolve(h, 1.1, b).amplitudes));
    worst = std::abs(before - after);
    checks.push_back({"evolve_isometry", worst, 1e-12});
  }
  {  // chart geometry
    Vector z(n - 1);
    for (int i = 0; i < n - 1; ++i)
      z[i] = 0.5 * Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
    const ChartPoint p{z};
    const MetricData m = fs_metric(p);
    checks.push_back({"metric_inverse_pairing",
                      max_abs(m.g * m.g_inv.transpose() -
                              Matrix::Identity(n - 1, n - 1)),
                      1e-12});
    const auto jet = embedding_jet(p);
    double worst_cov = 0;
    for (int a = 0; a < n - 1; ++a)
      for (int b = 0; b < n - 1; ++b) {
        Matrix chart_route = Matrix::Zero(n, n);
        for (int c = 0; c < n - 1; ++c)
          chart_route += m.christoffel[c](a, b) * jet.d_z[c];
        worst_cov = std::max(
            worst_cov,
            max_abs(chart_route - tangent_project(jet.rho, jet.d_zz[a][b])));
      }
    checks.push_back({"covder_chart_vs_ambient", worst_cov, 1e-8});
    checks.push_back(
        {"riemann_vs_finite_difference",
         curvature_check(std::min(n - 1, 2), rng, inject), 1e-6});
  }
  {  // embedded geometry
    const PureState psi = random_state(n, rng);
    const Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    auto normal_ket = [&]() {
      Vector v = random_state(n, rng).amplitudes;
      v -= psi.amplitudes * psi.amplitudes.dot(v);
      return v;
    };
    const Vector u = normal_ket(), v = normal_ket();
    const Matrix xu = u * psi.amplitudes.adjoint() + psi.amplitudes * u.adjoint();
    const Matrix xv = v * psi.amplitudes.adjoint() + psi.amplitudes * v.adjoint();
    checks.push_back(
        {"pullback_metric", std::abs(metric_G(xu, xv) - u.dot(v).real()), 1e-10});
    const Matrix zz = random_hermitian(n, rng), xx = random_hermitian(n, rng),
                 yy = random_hermitian(n, rng);
    checks.push_back({"ad_invariance",
                      std::abs(metric_G(commutator(zz, xx), yy) +
                               metric_G(xx, commutator(zz, yy))),
                      1e-10});
    const ProjectorState rp{rho};
    const Matrix tx = tangent_project(rp, xx);
    checks.push_back(
        {"complex_structure_squared",
         max_abs(complex_structure(rp, complex_structure(rp, tx)) + tx), 1e-12});
  }
  {  // curves
    const Matrix h = constraint_project(random_hermitian(n, rng));
    const ProjectorState rho0 = ProjectorState::from_ket(random_state(n, rng));
    const Curve c = Curve::schroedinger(h, rho0);
    const auto d = ambient_derivatives(c, 0.0, 2);
    const double mu = 0.5 * (d[0] * d[0]).trace().real();
    checks.push_back(
        {"rhod_cubed_identity", max_abs(d[0] * d[0] * d[0] - mu * d[0]), 1e-10});
    double worst_speed = 0;
    const double v0 = metric_G(c.derivative(0.0), c.derivative(0.0));
    for (double t = 0.5; t <= 3.0; t += 0.5)
      worst_speed = std::max(
          worst_speed,
          std::abs(metric_G(c.derivative(t), c.derivative(t)) - v0));
    checks.push_back({"speed_constancy", worst_speed, 1e-10});
    const AccelNormRoutes routes = accel_norm_sq_routes(h, rho0);
    checks.push_back({"accel_route_agreement",
                      std::max(std::abs(routes.moments - routes.superop),
                               std::abs(routes.moments - routes.metric)),
                      1e-10});
  }
  {  // phase
    const ProjectorState a = ProjectorState::from_ket(random_state(n, rng));
    const ProjectorState b = ProjectorState::from_ket(random_state(n, rng));
    const auto conn = geodesic_between(a, b);
    double worst_null = 0;
    const PhaseTrace tr = geometric_phase(conn.curve, 1.0, 128);
    for (double ph : tr.phase) worst_null = std::max(worst_null, std::abs(ph));
    checks.push_back({"geodesic_null_phase", worst_null, 1e-8});

    const Matrix h = constraint_project(random_hermitian(n, rng));
    const ProjectorState rho0 = ProjectorState::from_ket(random_state(n, rng));
    const Curve c = Curve::schroedinger(h, rho0);
    const PhaseDerivatives dc = phase_derivs_covariant(covariant_jet(c, 0.0));
    const PhaseDerivatives dv = phase_derivs_vtilde(vtilde_expansion(c, 3));
    const double s3 = std::max(1e-3, std::abs(dv.d3));
    const double s5 = std::max(1e-3, std::abs(dv.d5));
    checks.push_back({"derivative_route_d3",
                      std::abs(dc.d3 - dv.d3) / s3, 1e-9});
    checks.push_back({"derivative_route_d5",
                      std::abs(dc.d5 - dv.d5) / s5, 1e-6});

    const GeodesicFrame f = geodesic_frame(c, 0.3);
    const double rate = frame_phase_rate(f);
    const double dt = 1e-3;
    const double slope = (geometric_phase_value(c, 0.3 + dt, 192) -
                          geometric_phase_value(c, 0.3 - dt, 192)) /
                         (2 * dt);
    checks.push_back({"frame_rate_vs_slope",
                      std::abs(rate - slope) / std::max(1e-6, std::abs(slope)),
                      1e-4});
    double worst_comm = 0;
    for (double s : {0.25, 0.75}) {
      const Matrix x = frame_X(c, 0.3, s);
      const Complex lhs = (rho0.matrix * commutator(x, f.Y)).trace();
      const Complex rhs = -f.L * f.b * std::sin(2.0 * f.L * s);
      worst_comm = std::max(worst_comm, std::abs(lhs - rhs));
    }
    checks.push_back({"frame_commutator_identity", worst_comm, 1e-8});
  }
  {  // optimization and constellations
    const Matrix h = random_hermitian(n, rng);
    const ProjectorState rho = ProjectorState::from_ket(random_state(n, rng));
    const Matrix u = random_unitary(n, rng);
    const ProjectorState rho_u(u * rho.matrix * u.adjoint());
    checks.push_back({"orbit_invariance",
                      std::abs(accel_objective(u * h * u.adjoint(), rho_u) -
                               accel_objective(h, rho)),
                      1e-10});
    const ProjectorState e0 = ProjectorState::from_ket(coherent_state(n));
    checks.push_back(
        {"accel_sign_degeneracy",
         std::abs(accel_objective(max_accel_hamiltonian(e0, +1).H_canonical, e0) -
                  accel_objective(max_accel_hamiltonian(e0, -1).H_canonical, e0)),
         1e-12});
    const Matrix pr = constraint_project(random_hermitian(n, rng));
    checks.push_back(
        {"constraint_projection_idempotent", max_abs(constraint_project(pr) - pr),
         1e-12});
    const PureState psi = random_state(n, rng);
    const PureState back = state_from_constellation(constellation(psi));
    checks.push_back({"constellation_round_trip",
                      std::abs(std::abs(back.amplitudes.dot(psi.amplitudes)) - 1.0),
                      1e-7});
  }

  json j;
  j["format"] = kFormatVersion;
  j["config"] = cfg.echo();
  json rows = json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    rows.push_back({{"name", c.name},
                    {"residual", c.residual},
                    {"tol", c.tol},
                    {"pass", c.pass()}});
    all_pass = all_pass && c.pass();
  }
  j["checks"] = rows;
  j["all_pass"] = all_pass;
  write_output(cfg, j.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-state geometry: geometric phases, optimal evolutions, "
               "and Majorana constellations"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_text = "0:3.2:33";
  std::string sign_text = "+";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spin,-s", [&cfg](const CLI::results_t& r) {
          cfg.spin = parse_spin(r[0]);
          return true;
        }, "spin (half-integer, e.g. 1/2 or 3/2)")->type_name("SPIN");
    sub->add_option("--state", cfg.state,
                    "state preset {coherent, ghz, tetrahedral} or amplitude file");
    sub->add_option("--hamiltonian", cfg.hamiltonian,
                    "hamiltonian preset {brachistophase, maxaccel, geodesic, "
                    "random} or matrix file");
    sub->add_option("--tau", cfg.tau, "evolution time");
    sub->add_option("--grid", grid_text, "time grid start:end:nodes");
    sub->add_option("--steps", cfg.steps, "integrator steps")
        ->check(CLI::Range(16, 1 << 20));
    sub->add_option("--samples", cfg.samples, "random-search samples")
        ->check(CLI::Range(1, 1 << 26));
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--order", cfg.order, "Taylor order {3,5}")
        ->check(CLI::IsMember({3, 5}));
    sub->add_option("--sign", sign_text, "solution branch {+,-}")
        ->check(CLI::IsMember({"+", "-"}));
    sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--inject", cfg.inject,
                    "fault-injection hook for negative controls (testing)");
  };

  CLI::App* phase = app.add_subcommand("phase", "integrated phase trace");
  CLI::App* optimize = app.add_subcommand("optimize", "brachistophase report");
  CLI::App* constellation =
      app.add_subcommand("constellation", "star trajectory export");
  CLI::App* verify = app.add_subcommand("verify", "cross-module invariant suite");
  for (CLI::App* sub : {phase, optimize, constellation, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.grid = parse_grid(grid_text);
    cfg.sign = (sign_text == "+") ? +1 : -1;
    if (phase->parsed()) {
      cfg.command = "phase";
      return cmd_phase(cfg);
    }
    if (optimize->parsed()) {
      cfg.command = "optimize";
      return cmd_optimize(cfg);
    }
    if (constellation->parsed()) {
      cfg.command = "constellation";
      return cmd_constellation(cfg);
    }
    cfg.command = "verify";
    return cmd_verify(cfg);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
