#pragma once

#include <functional>
#include <string>

#include "angmom/wavefunction.hpp"

namespace angmom {

enum class ModeKind { j3_w_eigenstate, sam_wavepacket, vector_lg };
enum class ThetaProfileKind { gaussian_in_theta, uniform_band };
/// How the SAM packet's polarization is continued away from its support point:
/// rotated along the geodesic (exact helicity) or projected transverse.
enum class CarrierKind { transported, projected };

const char *to_string(ModeKind k);
const char *to_string(ThetaProfileKind k);
const char *to_string(CarrierKind k);
ModeKind mode_kind_from_string(const std::string &s);
ThetaProfileKind theta_profile_from_string(const std::string &s);
CarrierKind carrier_from_string(const std::string &s);

/// Amplitude exp(-(k - k0)^2 / (4 sigma_k^2)), so |amplitude|^2 has width sigma_k.
struct RadialProfile {
  double k0 = 3.0;
  double sigma_k = 0.4;
};

/// gaussian_in_theta: amplitude exp(-(theta - theta0)^2 / (4 sigma^2)).
/// uniform_band: amplitude 1 for theta_min <= theta <= theta_max, else 0.
struct ThetaProfile {
  ThetaProfileKind kind = ThetaProfileKind::uniform_band;
  double theta0 = kPi / 2;
  double sigma = 0.25;
  double theta_min = 0.0;
  double theta_max = kPi;

  double amplitude(double theta) const;
};

struct ModeSpec {
  ModeKind kind = ModeKind::j3_w_eigenstate;
  int m = 1;
  int w = 1;
  int p = 0;
  Vec3 s_direction{0.0, 0.0, 1.0};
  double kappa = 100.0;
  CarrierKind carrier = CarrierKind::transported;
  RadialProfile radial_profile;
  ThetaProfile theta_profile;
  double w0 = 4.0;
  double k_fixed = 6.0;
  /// Radial width of the LG carrier; <= 0 selects k_fixed / 50.
  double lg_sigma_k = 0.0;
  /// Project the paraxial LG field onto the transverse subspace.
  bool lg_project = false;

  void validate() const;
};

TransverseWavefunction build_mode(const ModeSpec &spec, GridPtr grid);

/// v = a(k, theta) e^{i(m - w) phi} eps^w(khat), unit norm on the grid.
TransverseWavefunction build_j3_w_eigenstate(const ModeSpec &spec, GridPtr grid);

/// Probability density of x = cos(theta) for a J3-W eigenstate.
struct ThetaDistribution {
  std::function<double(double)> p_of_x;
  double mean_x = 0.0;  // <x>_0
  double mean_x2 = 0.0; // <x^2>_0
};

ThetaDistribution theta_distribution(const ModeSpec &spec);

/// Regularized SAM/helicity eigen-wave-packet: von Mises-Fisher amplitude
/// exp(kappa khat . (w s)) times the radial profile, carrying eps+(s).
TransverseWavefunction build_sam_wavepacket(const ModeSpec &spec, GridPtr grid);

/// Scalar Laguerre-Gauss function of the transverse wave vector (rho, phi).
cplx scalar_lg(int m, int p, double w0, double rho, double phi);

/// Paraxial vector LG mode on the forward hemisphere, unit norm.
TransverseWavefunction build_vector_lg(const ModeSpec &spec, GridPtr grid);

} // namespace angmom
