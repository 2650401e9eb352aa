#include "angmom/polarization.hpp"

#include <cmath>
#include <string>

namespace angmom {

namespace {

void check_theta(double theta, const char *where) {
  if (!(theta >= 0.0 && theta < kPi))
    throw ConfigError(std::string(where) +
                      ": theta must lie in [0, pi); the circular basis is "
                      "multivalued at theta = pi");
}

CVec3 eps_plus(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const cplx pre = std::polar(1.0 / std::sqrt(2.0), phi);
  return {pre * cplx(ct * cp, -sp), pre * cplx(ct * sp, cp), pre * cplx(-st, 0.0)};
}

CVec3 from_plus(int a, const CVec3 &ep) {
  if (a > 0) return ep;
  return kI * conj(ep);
}

} // namespace

PolarizationPair polarization_pair(double theta, double phi) {
  check_theta(theta, "polarization_pair");
  PolarizationPair p;
  p.theta = theta;
  p.phi = phi;
  p.eps_plus = eps_plus(theta, phi);
  p.eps_minus = kI * conj(p.eps_plus);
  return p;
}

CVec3 polarization_vector(int a, double theta, double phi) {
  if (a != 1 && a != -1) throw ConfigError("polarization_vector: a must be +1 or -1");
  check_theta(theta, "polarization_vector");
  return from_plus(a, eps_plus(theta, phi));
}

CVec3 parity_image(const PolarizationPair &pair, int a) {
  if (a != 1 && a != -1) throw ConfigError("parity_image: a must be +1 or -1");
  const double theta_anti = kPi - pair.theta;
  if (!(theta_anti >= 0.0 && theta_anti < kPi))
    throw ConfigError("parity_image: the antipode of theta = 0 is the excluded point theta = pi");
  const CVec3 direct = from_plus(a, eps_plus(theta_anti, pair.phi + kPi));
  const cplx phase = kI * double(a) * std::polar(1.0, 2.0 * a * pair.phi);
  const CVec3 predicted = phase * pair(-a);
  if (norm(direct - predicted) > 1e-12)
    throw NumericalError("parity_image: parity relation violated");
  return direct;
}

std::pair<cplx, cplx> helicity_components(const CVec3 &v, double theta,
                                          double phi, double rel_tol) {
  const PolarizationPair p = polarization_pair(theta, phi);
  const double vn = norm(v);
  if (std::abs(dot(p.khat(), v)) > rel_tol * vn)
    throw ConfigError("helicity_components: vector is not transverse to khat");
  return {cdot(p.eps_plus, v), cdot(p.eps_minus, v)};
}

} // namespace angmom
