// Constrained optimization over hamiltonians: the maximal-acceleration and
// brachistophase solutions, orbit transport to arbitrary initial states, the
// truncated Taylor phase model, its validity threshold, and a seeded random
// search baseline.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinphase/core.hpp"

namespace spinphase {

// h_m = Tr(rho0 H^m) for m = 0..m_max (h_0 = 1).
std::vector<double> moments(const Matrix& h, const ProjectorState& rho0, int m_max);

// Split of H against the coherent state: scalar b, column v, lower block B.
struct BlockDecomposition {
  double b = 0.0;
  Vector v_block;
  Matrix B;
  double beta_block = 0.0;          // |v|
  Matrix B_tilde;                   // B - b I
  std::vector<double> lambda;       // eigenvalues of B_tilde, |lambda_1| largest
  bool normalized = false;          // Tr H = 0 and Tr H^2 / 2 = 1 within tolerance

  Matrix reassemble() const;
};

BlockDecomposition block_decompose(const Matrix& h);

// Remove the trace and rescale so that Tr H^2 / 2 = 1. Idempotent.
Matrix constraint_project(const Matrix& h);

// f = h4 - 4 h3 h1 - h2^2 + 8 h2 h1^2 - 4 h1^4; for the coherent state this
// equals |B_tilde v|^2 (checked internally in that case).
double accel_objective(const Matrix& h, const ProjectorState& rho0);

struct OptimalSolution {
  Matrix H_canonical;    // solution at the coherent state
  Matrix H_transported;  // conjugated to the requested initial state
  Matrix transport_U;
  double objective = 0.0;
  int sign_choice = +1;
};

// U e0 ~ target ket; antipodal targets go through a fixed two-leg geodesic
// composition.
Matrix transport_unitary(const PureState& target);

// Maximizes the initial acceleration; objective value 1 for every dimension.
OptimalSolution max_accel_hamiltonian(const ProjectorState& rho0, int sign = +1);

// Maximizes the third phase derivative; the default sign makes it positive.
OptimalSolution brachistophase_hamiltonian(const ProjectorState& rho0, int sign = +1);

// Truncated Taylor phase: tau^3/6 d3 (+ tau^5/120 d5 at order 5). The even
// orders vanish for Schroedinger curves.
double taylor_phase(const Matrix& h, const ProjectorState& rho0, double tau, int order);

// tau0 = sqrt((d3/3!) / (d5/5!)); empty when d5 vanishes or differs in sign.
std::optional<double> tau0_threshold(const Matrix& h, const ProjectorState& rho0);

struct RandomSearchResult {
  Matrix best_h;
  double best_phi = 0.0;
  std::uint64_t best_index = 0;
  std::vector<double> phi_trace;  // per-sample phase
  int samples = 0;
  std::uint64_t seed = 0;
};

// Draws GUE-style hamiltonians, projects them onto the constraint set, and
// evaluates the integrated geometric phase at tau. Deterministic for a fixed
// seed regardless of the worker count (per-sample derived seeds, max-merge).
RandomSearchResult random_search(const ProjectorState& rho0, double tau,
                                 int samples, std::uint64_t seed,
                                 int integration_steps = 256, int threads = 0);

}  // namespace spinphase
