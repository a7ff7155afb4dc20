#include "spinphase/brachistophase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "spinphase/phase.hpp"

namespace spinphase {

std::vector<double> moments(const Matrix& h, const ProjectorState& rho0, int m_max) {
  if (m_max < 0 || m_max > 8)
    throw std::invalid_argument("moments: m_max must be 0..8");
  std::vector<double> out;
  out.reserve(m_max + 1);
  Matrix pw = Matrix::Identity(h.rows(), h.cols());
  for (int m = 0; m <= m_max; ++m) {
    const Complex tr = (rho0.matrix * pw).trace();
    if (std::abs(tr.imag()) > 1e-10)
      throw std::runtime_error("moments: non-real moment, imag " +
                               std::to_string(tr.imag()));
    out.push_back(tr.real());
    pw = pw * h;
  }
  return out;
}

Matrix BlockDecomposition::reassemble() const {
  const int n = static_cast<int>(v_block.size());
  Matrix h(n + 1, n + 1);
  h(0, 0) = b;
  h.block(1, 0, n, 1) = v_block;
  h.block(0, 1, 1, n) = v_block.adjoint();
  h.block(1, 1, n, n) = B;
  return h;
}

BlockDecomposition block_decompose(const Matrix& h) {
  if (!is_hermitian(h)) throw std::invalid_argument("block_decompose: non-hermitian");
  const int n = static_cast<int>(h.rows()) - 1;
  BlockDecomposition d;
  d.b = h(0, 0).real();
  d.v_block = h.block(1, 0, n, 1);
  d.B = h.block(1, 1, n, n);
  d.beta_block = d.v_block.norm();
  d.B_tilde = d.B - d.b * Matrix::Identity(n, n);

  Eigen::SelfAdjointEigenSolver<Matrix> es(d.B_tilde);
  d.lambda.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(d.lambda.begin(), d.lambda.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });

  const double tr = h.trace().real();
  const double tr2 = 0.5 * (h * h).trace().real();
  d.normalized = std::abs(tr) <= 1e-10 && std::abs(tr2 - 1.0) <= 1e-10;
  return d;
}

Matrix constraint_project(const Matrix& h) {
  const int n = static_cast<int>(h.rows());
  Matrix out = h - (h.trace() / double(n)) * Matrix::Identity(n, n);
  const double norm2 = 0.5 * (out * out).trace().real();
  if (norm2 <= 0.0)
    throw std::domain_error("constraint_project: zero traceless part");
  return out / std::sqrt(norm2);
}

double accel_objective(const Matrix& h, const ProjectorState& rho0) {
  const auto hm = moments(h, rho0, 4);
  const double f = hm[4] - 4.0 * hm[3] * hm[1] - hm[2] * hm[2] +
                   8.0 * hm[2] * hm[1] * hm[1] - 4.0 * std::pow(hm[1], 4);
  // For the coherent state the block form |B_tilde v|^2 must agree.
  const int n = rho0.dimension();
  Matrix e0 = Matrix::Zero(n, n);
  e0(0, 0) = 1.0;
  if (max_abs(rho0.matrix - e0) < 1e-13) {
    const BlockDecomposition d = block_decompose(h);
    const double via_block = (d.B_tilde * d.v_block).squaredNorm();
    if (std::abs(f - via_block) > 1e-10 * std::max(1.0, std::abs(f)))
      throw std::runtime_error("accel_objective: block route disagrees");
  }
  return f;
}

Matrix transport_unitary(const PureState& target) {
  const int n = target.dimension();
  const Vector e0 = coherent_state(n).amplitudes;

  auto leg = [&](const Vector& from, const Vector& to) {
    const Complex ov = from.dot(to);
    const Vector to_fixed = to * (std::conj(ov) / std::abs(ov));
    const double cosL = std::clamp(from.dot(to_fixed).real(), -1.0, 1.0);
    const double L = std::acos(cosL);
    if (L < 1e-14) return Matrix(Matrix::Identity(n, n));
    const Vector xi = (to_fixed - cosL * from) / std::sin(L);
    const Matrix chi =
        Complex(0.0, 1.0) * (xi * from.adjoint() - from * xi.adjoint());
    return Matrix(Matrix::Identity(n, n) - Complex(0.0, std::sin(L)) * chi -
                  (1.0 - std::cos(L)) * (chi * chi));
  };

  const Complex ov = e0.dot(target.amplitudes);
  if (std::abs(ov) > tol::antipodal) return leg(e0, target.amplitudes);
  // Antipodal: fixed two-leg composition through the midpoint.
  const Vector mid = ((e0 + target.amplitudes) / std::sqrt(2.0)).eval();
  return leg(mid, target.amplitudes) * leg(e0, mid);
}

namespace {

Matrix embedded_block(int n_total, double a00, double a01, double a11) {
  Matrix h = Matrix::Zero(n_total, n_total);
  h(0, 0) = a00;
  h(0, 1) = a01;
  h(1, 0) = a01;
  h(1, 1) = a11;
  return h;
}

OptimalSolution transported(const Matrix& canonical, const ProjectorState& rho0,
                            double objective, int sign) {
  OptimalSolution s;
  s.H_canonical = canonical;
  s.transport_U = transport_unitary(rho0.ket());
  s.H_transported = s.transport_U * canonical * s.transport_U.adjoint();
  s.objective = objective;
  s.sign_choice = sign;
  return s;
}

}  // namespace

OptimalSolution max_accel_hamiltonian(const ProjectorState& rho0, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("max_accel_hamiltonian: sign must be +-1");
  const int n = rho0.dimension();
  if (n < 2) throw std::invalid_argument("max_accel_hamiltonian: need dim >= 2");
  const double r = 1.0 / std::sqrt(2.0);
  const Matrix canonical = embedded_block(n, sign * r, r, -sign * r);
  return transported(canonical, rho0, 1.0, sign);
}

OptimalSolution brachistophase_hamiltonian(const ProjectorState& rho0, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("brachistophase_hamiltonian: sign must be +-1");
  const int n = rho0.dimension();
  if (n < 2) throw std::invalid_argument("brachistophase_hamiltonian: need dim >= 2");
  const double r = 1.0 / std::sqrt(3.0);
  // sign = +1 picks b = -1/sqrt(3), which makes the third phase derivative
  // positive; the objective below is that derivative.
  const Matrix canonical =
      embedded_block(n, -sign * r, std::sqrt(2.0) * r, sign * r);
  const double d3 = 4.0 * std::sqrt(3.0) / 9.0;
  return transported(canonical, rho0, sign * d3, sign);
}

double taylor_phase(const Matrix& h, const ProjectorState& rho0, double tau,
                    int order) {
  if (order != 3 && order != 5)
    throw std::invalid_argument("taylor_phase: order must be 3 or 5");
  if (tau < 0.0) throw std::invalid_argument("taylor_phase: tau must be >= 0");
  const double d3 = schrodinger_d3(h, rho0);
  double phi = tau * tau * tau / 6.0 * d3;
  if (order == 5) {
    const Curve c = Curve::schroedinger(h, rho0);
    const PhaseDerivatives d = phase_derivs_vtilde(vtilde_expansion(c, 3));
    phi += std::pow(tau, 5) / 120.0 * d.d5;
  }
  return phi;
}

std::optional<double> tau0_threshold(const Matrix& h, const ProjectorState& rho0) {
  const double d3 = schrodinger_d3(h, rho0);
  const Curve c = Curve::schroedinger(h, rho0);
  const PhaseDerivatives d = phase_derivs_vtilde(vtilde_expansion(c, 3));
  const double d5 = d.d5;
  if (d5 == 0.0 || d3 * d5 <= 0.0) return std::nullopt;
  return std::sqrt((d3 / 6.0) / (d5 / 120.0));
}

RandomSearchResult random_search(const ProjectorState& rho0, double tau,
                                 int samples, std::uint64_t seed,
                                 int integration_steps, int threads) {
  if (samples < 1) throw std::invalid_argument("random_search: samples >= 1");
  const int n = rho0.dimension();

  if (threads <= 0) {
    const char* env = std::getenv("BRACHISTO_THREADS");
    if (env) threads = std::max(1, std::atoi(env));
  }
  if (threads <= 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, samples);

  RandomSearchResult result;
  result.samples = samples;
  result.seed = seed;
  result.phi_trace.assign(samples, 0.0);
  std::vector<Matrix> sample_h(samples);

  auto worker = [&](int first, int last) {
    for (int i = first; i < last; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      const Matrix h = constraint_project(random_hermitian(n, rng));
      const Curve c = Curve::schroedinger(h, rho0);
      result.phi_trace[i] = geometric_phase_value(c, tau, integration_steps);
      sample_h[i] = h;
    }
  };

  if (threads == 1) {
    worker(0, samples);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int first = t * chunk;
      const int last = std::min(samples, first + chunk);
      if (first < last) pool.emplace_back(worker, first, last);
    }
    for (auto& th : pool) th.join();
  }

  int best = 0;
  for (int i = 1; i < samples; ++i)
    if (result.phi_trace[i] > result.phi_trace[best]) best = i;
  result.best_index = static_cast<std::uint64_t>(best);
  result.best_phi = result.phi_trace[best];
  result.best_h = sample_h[best];
  return result;
}

}  // namespace spinphase
