// Curves in the projector manifold: Schroedinger evolutions, geodesics and
// sampled paths, their ambient time derivatives and covariant jets.
#pragma once

#include <optional>
#include <vector>

#include "spinphase/geometry.hpp"

namespace spinphase {

struct GeodesicConnection;

class Curve {
 public:
  enum class Kind { Schroedinger, Geodesic, Sampled };

  static Curve schroedinger(const Matrix& h, const ProjectorState& rho0);
  static Curve geodesic(const ProjectorState& rho0, const ProjectorState& rho1);
  // Consecutive kets are re-phased to maximal real overlap on construction so
  // that finite differences see a smooth lift.
  static Curve sampled(std::vector<double> times, std::vector<PureState> states);

  Kind kind() const { return kind_; }
  int dimension() const { return n_; }

  ProjectorState at(double t) const;
  Matrix derivative(double t) const;  // d(rho)/dt in the ambient space

  // Exact Taylor coefficients psi_k of a ket lift around t = 0, available for
  // the analytic kinds. psi(t) = sum_k psi_k t^k.
  std::optional<std::vector<Vector>> ket_taylor(int order) const;

  const Matrix& hamiltonian() const;            // Schroedinger only
  const ProjectorState& initial_state() const { return rho0_; }
  double geodesic_length() const;               // Geodesic only
  const PureState& geodesic_xi() const;         // Geodesic only
  const PureState& geodesic_psi0() const;       // Geodesic only
  const std::vector<double>& sample_times() const { return times_; }
  const std::vector<PureState>& sample_states() const { return states_; }

  friend struct GeodesicConnection;
  friend GeodesicConnection geodesic_between(const ProjectorState& rho0,
                                             const ProjectorState& rho1);

 private:
  Curve() = default;

  Kind kind_ = Kind::Schroedinger;
  int n_ = 0;
  ProjectorState rho0_;

  // Schroedinger data
  Matrix h_;
  SpectralDecomposition hspec_;

  // Geodesic data
  PureState psi0_, xi_;
  double length_ = 0.0;

  // Sampled data
  std::vector<double> times_;
  std::vector<PureState> states_;
  std::vector<Matrix> node_rho_;

  Vector sampled_ket(double t, Vector* dket) const;
};

struct GeodesicConnection {
  Curve curve;
  double length = 0.0;  // arccos sqrt(Tr rho0 rho1), in (0, pi/2]
  PureState xi;         // point of the geodesic orthogonal to psi0
};

// Rejects coincident or antipodal endpoint pairs (xi would be undefined).
GeodesicConnection geodesic_between(const ProjectorState& rho0,
                                    const ProjectorState& rho1);

// rho', rho'', ... up to the requested order (<= 4). Exact nested commutators
// for Schroedinger curves, analytic for geodesics, central finite differences
// on the sample grid otherwise.
std::vector<Matrix> ambient_derivatives(const Curve& c, double t, int order);

// Velocity and first three covariant derivatives at time t, all tangent at
// rho(t). gamma is a transported central difference of beta (step 1e-3,
// Richardson extrapolated).
struct CovariantJet {
  Matrix v, alpha, beta, gamma;
  double mu = 0.0;        // <psid|psid> = Tr(rhod^2)/2
  double speed_sq = 0.0;  // g(v, v), equal to mu
  ProjectorState rho;
};

CovariantJet covariant_jet(const Curve& c, double t);

// |alpha|^2 for a Schroedinger curve by three routes (h-moments, vectorized
// superoperator form, G(alpha, alpha)); they are checked against each other
// to 1e-10 and the moment value is returned.
struct AccelNormRoutes {
  double moments = 0.0;
  double superop = 0.0;
  double metric = 0.0;
};
AccelNormRoutes accel_norm_sq_routes(const Matrix& h, const ProjectorState& rho0);
double accel_norm_sq(const Matrix& h, const ProjectorState& rho0);

// Curvature |a| with |a|^2 = |alpha|^2 / (h2 - h1^2); constant-speed curves
// only, stationary states rejected.
double curvature(const Curve& c, double t);

// Parallel transport along the connecting geodesic (transvection). Returns U
// with U rho_from U^dag = rho_to; transport of tangent Z is U Z U^dag.
Matrix geodesic_transvection(const ProjectorState& from, const ProjectorState& to);

}  // namespace spinphase
