// Acceptance suite: one numbered criterion per invocation, each printing a
// PASS/FAIL line with the measured numbers. Criteria 6b and 6c assert
// constants that every independent route in this library contradicts; they
// are kept as stated and are expected to fail. See the test commentary below
// and the project notes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "spinphase/brachistophase.hpp"
#include "spinphase/majorana.hpp"
#include "spinphase/phase.hpp"

using namespace spinphase;

namespace {

int g_failures = 0;

void report(const std::string& label, bool pass, const std::string& detail) {
  std::printf("%s %s  (%s)\n", pass ? "PASS" : "FAIL", label.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

ProjectorState random_projector(int n, Rng& rng) {
  return ProjectorState::from_ket(random_state(n, rng));
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --- criterion implementations ---------------------------------------------

void criterion_1() {
  // geodesics accumulate no phase: 50 random geodesics, N in 2..6
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    Rng rng(derive_seed(101, trial));
    const auto conn = geodesic_between(random_projector(n, rng),
                                       random_projector(n, rng));
    const PhaseTrace tr = geometric_phase(conn.curve, 1.0, 128);
    for (double p : tr.phase) worst = std::max(worst, std::abs(p));
  }
  const double dt = seconds_since(t0);
  report("criterion 1: geodesic null phase", worst < 1e-8 && dt < 10.0,
         "max |phi| = " + num(worst) + ", runtime " + num(dt) + " s");
}

void criterion_2() {
  // vanishing first and second derivatives of the integrated phase
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    Rng rng(derive_seed(202, trial));
    const Matrix h = constraint_project(random_hermitian(n, rng));
    const Curve c = Curve::schroedinger(h, random_projector(n, rng));
    const double hstep = 0.004;
    auto phi = [&](double t) {
      return t == 0.0 ? 0.0 : geometric_phase_value(c, t, 64);
    };
    const double f1 = (phi(hstep) - phi(-hstep)) / (2 * hstep);
    const double f2 =
        (phi(hstep) - 2 * phi(0.0) + phi(-hstep)) / (hstep * hstep);
    worst = std::max({worst, std::abs(f1), std::abs(f2)});
  }
  report("criterion 2: vanishing low-order derivatives", worst < 1e-5,
         "max |fd| = " + num(worst));
}

void criterion_3() {
  // derivative-formula equivalence on 100 random instances, N <= 5
  const auto t0 = std::chrono::steady_clock::now();
  double worst_exact = 0.0, worst_fd = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    Rng rng(derive_seed(303, trial));
    const Matrix h = constraint_project(random_hermitian(n, rng));
    const ProjectorState rho0 = random_projector(n, rng);
    const Curve c = Curve::schroedinger(h, rho0);

    const PhaseDerivatives dc = phase_derivs_covariant(covariant_jet(c, 0.0));
    const PhaseDerivatives dv = phase_derivs_vtilde(vtilde_expansion(c, 3));
    const double sd3 = schrodinger_d3(h, rho0);

    const double s3 = std::max(1.0, std::abs(dv.d3));
    const double s5 = std::max(1.0, std::abs(dv.d5));
    worst_exact = std::max({worst_exact, std::abs(dc.d3 - dv.d3) / s3,
                            std::abs(sd3 - dv.d3) / s3,
                            std::abs(dc.d4 - dv.d4),
                            std::abs(dc.d5 - dv.d5) / s5});

    // finite differences of the integrated phase (orders 3 and 5), one
    // Richardson step to clear the h^2 truncation
    auto phi = [&](double t) {
      return t == 0.0 ? 0.0 : geometric_phase_value(c, t, 96);
    };
    auto stencil = [&](double hs, double* d3, double* d5) {
      double f[7];
      for (int k = -3; k <= 3; ++k) f[k + 3] = phi(k * hs);
      *d3 = (f[5] - 2 * f[4] + 2 * f[2] - f[1]) / (2 * hs * hs * hs);
      *d5 = (f[6] - 4 * f[5] + 5 * f[4] - 5 * f[2] + 4 * f[1] - f[0]) /
            (2 * std::pow(hs, 5));
    };
    double d3h, d5h, d3h2, d5h2;
    stencil(0.03, &d3h, &d5h);
    stencil(0.015, &d3h2, &d5h2);
    const double d3 = (4 * d3h2 - d3h) / 3;
    const double d5 = (4 * d5h2 - d5h) / 3;
    worst_fd = std::max({worst_fd, std::abs(d3 - dv.d3) / s3,
                         std::abs(d5 - dv.d5) / s5});
  }
  const double dt = seconds_since(t0);
  const bool pass = worst_exact < 1e-9 && worst_fd < 1e-3 && dt < 120.0;
  report("criterion 3: derivative-formula equivalence", pass,
         "exact routes " + num(worst_exact) + ", fd route " + num(worst_fd) +
             ", runtime " + num(dt) + " s");
}

void criterion_4() {
  // acceleration identities: moments = superoperator trace = G(alpha, alpha)
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    Rng rng(derive_seed(404, trial));
    const Matrix h = random_hermitian(n, rng);
    const ProjectorState rho0 = random_projector(n, rng);
    const AccelNormRoutes r = accel_norm_sq_routes(h, rho0);
    worst = std::max({worst, std::abs(r.moments - r.superop),
                      std::abs(r.moments - r.metric)});
  }
  report("criterion 4: acceleration identities", worst < 1e-10,
         "max residual = " + num(worst));
}

void criterion_5() {
  // analytic maximal acceleration is exactly 1 and random draws never exceed it
  double worst_exact = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const ProjectorState e0 = ProjectorState::from_ket(coherent_state(n));
    const OptimalSolution s = max_accel_hamiltonian(e0, +1);
    worst_exact =
        std::max(worst_exact, std::abs(accel_objective(s.H_canonical, e0) - 1.0));
  }
  double best_random = 0.0;
  for (int n = 2; n <= 4; ++n) {
    const ProjectorState e0 = ProjectorState::from_ket(coherent_state(n));
    Rng rng(derive_seed(505, n));
    for (int i = 0; i < 10000; ++i) {
      const Matrix h = constraint_project(random_hermitian(n, rng));
      best_random = std::max(best_random, accel_objective(h, e0));
    }
  }
  const bool pass = worst_exact < 1e-12 && best_random <= 1.0 + 1e-9;
  report("criterion 5: max-acceleration optimality", pass,
         "|f-1| = " + num(worst_exact) + ", best random = " + num(best_random));
}

void criterion_6() {
  const ProjectorState rho0 = ProjectorState::from_ket(coherent_state(2));
  const OptimalSolution sol = brachistophase_hamiltonian(rho0, +1);
  const Matrix& h = sol.H_canonical;
  const Curve c = Curve::schroedinger(h, rho0);

  const double d3 = schrodinger_d3(h, rho0);
  const double d3_expected = 4.0 * std::sqrt(3.0) / 9.0;
  const bool pass_a = std::abs(d3 - d3_expected) < 1e-12;
  report("criterion 6a: third derivative 4 sqrt(3)/9", pass_a,
         "d3 = " + num(d3));

  // The required window 1.732 +- 0.005 comes from a fifth-derivative value
  // of 80 sqrt(3)/27 that none of the independent routes here reproduce: the
  // integrated phase, its trace-algebra expansion, the geodesic-frame series
  // and the covariant formulas all give 16 sqrt(3)/9, hence tau0 = sqrt(5).
  // The check is kept as stated rather than loosened.
  const auto tau0 = tau0_threshold(h, rho0);
  const bool pass_b = tau0.has_value() && std::abs(*tau0 - 1.732) < 0.005;
  report("criterion 6b: tau0 = 1.732 +- 0.005", pass_b,
         "tau0 = " + (tau0 ? num(*tau0) : std::string("undefined")));

  // Same situation: at tau = 0.5 the cubic truncation sits ~4.9% below the
  // integrated phase (the ratio is tau-dependent), outside the required 2%.
  const double exact05 = geometric_phase_value(c, 0.5, 512);
  const double taylor05 = taylor_phase(h, rho0, 0.5, 3);
  const double rel05 = std::abs(taylor05 - exact05) / std::abs(exact05);
  const bool pass_c = rel05 < 0.02;
  report("criterion 6c: cubic model within 2% at tau = 0.5", pass_c,
         "relative gap = " + num(rel05));

  const double exact25 = geometric_phase_value(c, 2.5, 512);
  const double taylor25 = taylor_phase(h, rho0, 2.5, 3);
  const double rel25 = std::abs(taylor25 - exact25) / std::abs(exact25);
  const bool pass_d = rel25 > 0.25;
  report("criterion 6d: cubic model visibly divergent by tau = 2.5", pass_d,
         "relative gap = " + num(rel25));
}

void criterion_7() {
  const double r = 1.0 / std::sqrt(3.0);
  Matrix ghz_expect(4, 4);
  ghz_expect << -r / 2, r, 0, r / 2,
                r, r, 0, -r,
                0, 0, 0, 0,
                r / 2, -r, 0, -r / 2;
  const double s23 = std::sqrt(2.0 / 3.0);
  Matrix tet_expect(5, 5);
  tet_expect << -r / 3, std::sqrt(2.0) / 3, 0, -s23 / 3, 0,
                std::sqrt(2.0) / 3, r, 0, 2.0 / 3, 0,
                0, 0, 0, 0, 0,
                -s23 / 3, 2.0 / 3, 0, -2.0 * r / 3, 0,
                0, 0, 0, 0, 0;

  const OptimalSolution sg =
      brachistophase_hamiltonian(ProjectorState::from_ket(ghz_state()), +1);
  const OptimalSolution st =
      brachistophase_hamiltonian(ProjectorState::from_ket(tetrahedral_state()), +1);
  const double mg = max_abs(sg.H_transported - ghz_expect);
  const double mt = max_abs(st.H_transported - tet_expect);

  double worst_ket = 0.0;
  const Complex i(0, 1);
  for (double t : {0.5, 1.0, 2.0}) {
    Vector eg(4);
    eg << std::cos(t) / std::sqrt(2.0) + i * std::sin(t) / std::sqrt(6.0),
        -i * std::sqrt(2.0 / 3.0) * std::sin(t), 0.0,
        -std::cos(t) / std::sqrt(2.0) - i * std::sin(t) / std::sqrt(6.0);
    const PureState got = evolve(sg.H_transported, t, ghz_state());
    worst_ket = std::max(worst_ket,
                         std::abs(std::abs(got.amplitudes.dot(eg)) - 1.0));

    Vector et(5);
    et << std::cos(t) / std::sqrt(3.0) + i * std::sin(t) / 3.0,
        -i * std::sqrt(2.0 / 3.0) * std::sin(t), 0.0,
        (std::sqrt(6.0) * std::cos(t) + i * std::sqrt(2.0) * std::sin(t)) / 3.0,
        0.0;
    const PureState gott = evolve(st.H_transported, t, tetrahedral_state());
    worst_ket = std::max(worst_ket,
                         std::abs(std::abs(gott.amplitudes.dot(et)) - 1.0));
  }
  const bool pass = mg < 1e-10 && mt < 1e-10 && worst_ket < 1e-10;
  report("criterion 7: transport reproduction", pass,
         "matrix residuals " + num(mg) + ", " + num(mt) + "; ket residual " +
             num(worst_ket));
}

void criterion_8() {
  std::vector<double> grid;
  for (int k = 0; k < 50; ++k) grid.push_back(0.06 + k * (2.95 - 0.06) / 49.0);
  double worst_circle = 0.0, worst_tilt = 0.0;
  double tilt_half = 0.0;
  for (double s : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const FallingStarReport rep = falling_star_audit(s, grid);
    worst_circle = std::max(worst_circle, rep.circle_residual_max);
    worst_tilt = std::max(worst_tilt, std::abs(rep.tilt - rep.tilt_expected));
    if (s == 0.5) tilt_half = rep.tilt * 180.0 / std::numbers::pi;
  }
  const bool pass = worst_circle < 1e-10 && worst_tilt < 1e-6 &&
                    tilt_half > 54.0 && tilt_half < 56.0;
  report("criterion 8: falling-star geometry", pass,
         "circle residual " + num(worst_circle) + ", tilt residual " +
             num(worst_tilt) + ", s=1/2 tilt " + num(tilt_half) + " deg");
}

void criterion_9() {
  double worst_rate = 0.0, worst_comm = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    Rng rng(derive_seed(909, trial));
    const Matrix h = constraint_project(random_hermitian(n, rng));
    const ProjectorState rho0 = random_projector(n, rng);
    const Curve c = Curve::schroedinger(h, rho0);
    const double t = 0.2 + 0.02 * trial;

    const GeodesicFrame f = geodesic_frame(c, t);
    const double rate = frame_phase_rate(f);
    const double dt = 1e-3;
    const double slope = (geometric_phase_value(c, t + dt, 192) -
                          geometric_phase_value(c, t - dt, 192)) /
                         (2 * dt);
    worst_rate = std::max(worst_rate,
                          std::abs(rate - slope) / std::max(1e-9, std::abs(slope)));

    for (double s : {0.2, 0.5, 0.8}) {
      const Matrix x = frame_X(c, t, s);
      const Complex lhs = (rho0.matrix * commutator(x, f.Y)).trace();
      const Complex rhs = -f.L * f.b * std::sin(2.0 * f.L * s);
      worst_comm = std::max(worst_comm, std::abs(lhs - rhs));
    }
  }
  const bool pass = worst_rate < 1e-4 && worst_comm < 1e-8;
  report("criterion 9: geodesic-frame formulas", pass,
         "rate rel " + num(worst_rate) + ", commutator residual " +
             num(worst_comm));
}

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

void criterion_10() {
  double worst_r = 0.0;
  const double h = 1e-4;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3;
    Rng rng(derive_seed(1010, trial));
    Vector z(n);
    for (int i = 0; i < n; ++i)
      z[i] = 0.6 * Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
    const ChartPoint p{z};
    const Vector w0 = z.conjugate();

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

    const RiemannTensor rt = riemann(p);
    const Matrix g = g_continued(z, w0);
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
            worst_r = std::max(worst_r, std::abs(acc - rt(a, bbar, c, dbar)));
          }
    }
  }

  // chart covariant derivative against the projected ambient derivative
  double worst_cov = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2;
    Rng rng(derive_seed(1011, trial));
    Vector z(n);
    for (int i = 0; i < n; ++i)
      z[i] = 0.7 * Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
    const ChartPoint p{z};
    const auto jet = embedding_jet(p);
    const auto m = fs_metric(p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Matrix chart_route = Matrix::Zero(n + 1, n + 1);
        for (int c = 0; c < n; ++c)
          chart_route += m.christoffel[c](a, b) * jet.d_z[c];
        worst_cov = std::max(
            worst_cov,
            max_abs(chart_route - tangent_project(jet.rho, jet.d_zz[a][b])));
      }
  }

  // qubit distance is half the Bloch angle
  double worst_dist = 0.0;
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  sz << 1, 0, 0, -1;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(1012, trial));
    const ProjectorState a = random_projector(2, rng);
    const ProjectorState b = random_projector(2, rng);
    Eigen::Vector3d ra((a.matrix * sx).trace().real(),
                       (a.matrix * sy).trace().real(),
                       (a.matrix * sz).trace().real());
    Eigen::Vector3d rb((b.matrix * sx).trace().real(),
                       (b.matrix * sy).trace().real(),
                       (b.matrix * sz).trace().real());
    const double bloch = std::acos(std::clamp(ra.dot(rb), -1.0, 1.0));
    const auto conn = geodesic_between(a, b);
    worst_dist = std::max(worst_dist, std::abs(conn.length - 0.5 * bloch));
  }

  const bool pass = worst_r < 1e-6 && worst_cov < 1e-8 && worst_dist < 1e-10;
  report("criterion 10: geometry suite", pass,
         "curvature " + num(worst_r) + ", covariant " + num(worst_cov) +
             ", qubit distance " + num(worst_dist));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion index must be 1..10\n");
      return 2;
    }
    criteria[k - 1]();
  } else {
    for (const auto& fn : criteria) fn();
  }
  return g_failures == 0 ? 0 : 1;
}
