#pragma once

#include <utility>

#include "angmom/types.hpp"

namespace angmom {

/// Circular polarization vectors attached to the direction (theta, phi).
struct PolarizationPair {
  double theta = 0.0;
  double phi = 0.0;
  CVec3 eps_plus{};
  CVec3 eps_minus{};

  const CVec3 &operator()(int a) const { return a > 0 ? eps_plus : eps_minus; }
  Vec3 khat() const { return unit_vector(theta, phi); }
};

/// eps+ = e^{i phi}/sqrt2 (cos t cos p - i sin p, cos t sin p + i cos p, -sin t),
/// eps- = i conj(eps+). theta must lie in [0, pi).
PolarizationPair polarization_pair(double theta, double phi);

/// Same as polarization_pair(theta, phi)(a) without the pair.
CVec3 polarization_vector(int a, double theta, double phi);

/// eps^a(-khat), evaluated directly at the antipode and checked against
/// i a e^{2 i a phi} eps^{-a}(khat). Throws NumericalError if the two differ.
CVec3 parity_image(const PolarizationPair &pair, int a);

/// Components (v+, v-) with v_a = eps^a* . v. Rejects vectors whose
/// longitudinal part exceeds rel_tol * |v|.
std::pair<cplx, cplx> helicity_components(const CVec3 &v, double theta,
                                          double phi, double rel_tol = 1e-10);

} // namespace angmom
