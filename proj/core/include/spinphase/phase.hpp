// Open-curve geometric phase: path-ordered integration, the discrete
// Pancharatnam-product oracle, derivative formulas at t = 0 through covariant
// jets and through the geodesic-frame expansion.
#pragma once

#include <string>
#include <vector>

#include "spinphase/curves.hpp"

namespace spinphase {

struct PhaseTrace {
  std::vector<double> times;
  std::vector<double> phase;      // unwrapped, phase[0] = 0
  Matrix F_final;                 // path-ordered matrix at t_end
  std::vector<int> flagged;       // node indices where |Tr(rho0 F)| < 1e-10
  bool converged = false;         // doubling the step count moved the final
                                  // phase by < 1e-8
  std::string method = "ode";
};

// Integrates dF/dt = rhod F with fixed-step RK4 (steps >= 16) and returns
// phi = arg Tr(rho0 F), unwrapped along the grid. t_end may be negative.
PhaseTrace geometric_phase(const Curve& c, double t_end, int steps);
double geometric_phase_value(const Curve& c, double t_end, int steps);

// arg prod_k <psi_{k+1}|psi_k>, plus the wrap factor <psi_0|psi_last> when
// close is unset (the geodesic closure of an open chain). Oriented to agree
// with geometric_phase in the dense-sampling limit.
double bargmann_phase(const std::vector<PureState>& states, bool close = false);

// Pancharatnam-product trace over a uniform grid, as an independent oracle.
PhaseTrace bargmann_phase_trace(const Curve& c, double t_end, int nodes);

struct PhaseDerivatives {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0, d5 = 0.0, d6 = 0.0;
  int max_order = 5;
};

// Orders 3..5 from the covariant jet:
//   d3 = omega(alpha, v)
//   d4 = 2 omega(beta, v)
//   d5 = 3 omega(gamma, v) + 2 omega(beta, alpha) + 8 g(v,v) omega(alpha, v)
PhaseDerivatives phase_derivs_covariant(const CovariantJet& jet);

// h3 - 3 h2 h1 + 2 h1^3, the third derivative for Schroedinger curves.
double schrodinger_d3(const Matrix& h, const ProjectorState& rho0);

// Per-time geodesic frame: distance L, the orthogonal representative xi, the
// rotation generator chi, Y = L chi, Ytilde = sin(L) chi, and the gauge rate
// b = <xi|xid> (purely imaginary).
struct GeodesicFrame {
  double t = 0.0;
  double L = 0.0;
  PureState psi0, xi;
  Matrix chi, Y, Y_tilde;
  Complex b{0.0, 0.0};

  // U(s) = exp(-i s L chi) in closed form; U(1) maps rho0 to rho_t.
  Matrix U(double s) const;
};

GeodesicFrame geodesic_frame(const Curve& c, double t);

// X_{ts} = i U^{-1} Ud and the hatted variant i Ud U^{-1} (t-derivative by
// central differences with one Richardson step).
Matrix frame_X(const Curve& c, double t, double s);
Matrix frame_X_hat(const Curve& c, double t, double s);

// Phase rate of the frame: i b_t sin^2(L_t), a real number.
double frame_phase_rate(const GeodesicFrame& f);

// Taylor coefficients vtilde^(n), n = 0..K, of the inverse exponential map
// -J(Y_t) = sum vtilde^(n-1) t^n / n!. Exact via series arithmetic for curves
// with analytic ket lifts; least-squares fit on the frozen grid
// {0.02, ..., 0.12} otherwise.
struct VTildeExpansion {
  std::vector<Matrix> vtilde;
  ProjectorState rho0;
};

VTildeExpansion vtilde_expansion(const Curve& c, int max_order);

// Same expansion from explicit Taylor coefficients of an analytic (not
// necessarily normalized) ket path psi(t) = sum_k ket_coeffs[k] t^k.
VTildeExpansion vtilde_from_taylor(const std::vector<Vector>& ket_coeffs,
                                   int max_order);

// Orders 1..6 from the expansion (d6 needs vtilde^(4)):
//   d3 = omega(v1, v0)
//   d4 = 2 omega(v2, v0)
//   d5 = 3 omega(v3, v0) + 2 omega(v2, v1) - 4 g(v0,v0) omega(v1, v0)
//   d6 = 4 omega(v4, v0) + 5 omega(v3, v1) - 40/3 g(v0,v0) omega(v2, v0)
//        - 20 g(v1,v0) omega(v1, v0)
PhaseDerivatives phase_derivs_vtilde(const VTildeExpansion& e);

}  // namespace spinphase
