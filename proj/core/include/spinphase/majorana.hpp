// Majorana stellar representation: state -> polynomial -> roots -> 2s points
// on the sphere, star trajectories under evolution, and the falling-star
// circle audit for the optimal evolutions.
#pragma once

#include <vector>

#include "spinphase/core.hpp"

namespace spinphase {

// P(zeta) = sum_k (-1)^k sqrt(C(2s,k)) psi_k zeta^(2s-k); coefficients are
// returned highest degree first, so coeffs[0] = psi_0.
Vector majorana_polynomial(const PureState& psi);

// zeta = tan(theta/2) e^{i phi}: zeta = 0 is the north pole, roots lost to
// degree deficiency sit at the south pole.
Eigen::Vector3d star_from_root(const Complex& zeta);

struct MajoranaConstellation {
  std::vector<Eigen::Vector3d> stars;  // exactly 2s entries
  std::vector<Complex> roots;          // finite roots with multiplicity
  int roots_at_infinity = 0;

  int star_count() const { return static_cast<int>(stars.size()); }
};

// Roots by companion-matrix eigenvalues after deflating exact zero roots and
// degree deficiency; one Newton polish per simple root.
MajoranaConstellation constellation(const PureState& psi);

// Inverse map up to global phase (fixed-point check of the duality).
PureState state_from_constellation(const MajoranaConstellation& c);

struct StarTrajectory {
  std::vector<double> times;
  // tracks[star][node], continuity-matched unit vectors
  std::vector<std::vector<Eigen::Vector3d>> tracks;
  int merge_events = 0;  // ambiguous matchings that survived grid refinement
};

// Constellations along e^{-itH} psi0 at the grid nodes, matched greedily with
// a 0.2 rad step cap and bisection refinement of ambiguous segments.
StarTrajectory trajectory(const Matrix& h, const PureState& psi0,
                          const std::vector<double>& grid);

struct FallingStarReport {
  double s = 0.0;
  // brachistophase evolution: the single moving root traces the circle
  // |zeta - sqrt(s)| = sqrt(s)
  double circle_residual_max = 0.0;
  double tilt = 0.0;               // fitted normal angle of the moving star's plane
  double tilt_expected = 0.0;      // arctan(2 sqrt(s))
  double tilt_max_accel = 0.0;     // same fit for the max-acceleration evolution
  double tilt_max_accel_expected = 0.0;  // arctan(sqrt(2 s))
  bool max_accel_tilt_greater = false;   // measured ordering of the two tilts
};

// Audits the moving-star geometry on the given grid (which must avoid
// t = 0 mod pi, where the star returns to the pole).
FallingStarReport falling_star_audit(double s, const std::vector<double>& grid);

// Spin operators for the (2s+1)-dimensional representation, index 0 carrying
// m = s. Returned in the order Jx, Jy, Jz.
std::vector<Matrix> spin_operators(double s);

}  // namespace spinphase
