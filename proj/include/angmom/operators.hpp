#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>

#include "angmom/vsh.hpp"
#include "angmom/wavefunction.hpp"

namespace angmom {

// Axis indices are 1, 2, 3; apply_P also accepts 0 for the energy P^0.
// All actions use hbar = c = 1.

/// (S_l v)(k) = i khat_l (khat ^ v)
TransverseWavefunction apply_S(int l, const TransverseWavefunction &v);

/// (W v)(k) = i khat ^ v
TransverseWavefunction apply_W(const TransverseWavefunction &v);

/// P^0 multiplies by omega = |k|, P_l by k_l.
TransverseWavefunction apply_P(int l, const TransverseWavefunction &v);

/// Exact J_l in the (a, l, m) basis.
VshExpansion apply_J(int l, const VshExpansion &e);
/// J.J = sum_l J_l J_l, diagonal with eigenvalue l(l+1).
VshExpansion apply_J_squared(const VshExpansion &e);

/// J_l on a state carrying a spectral form; the result is synthesized on the
/// same grid and carries J_l applied to that form. Throws ConfigError if v has
/// no spectral form.
TransverseWavefunction apply_J(int l, const TransverseWavefunction &v);
TransverseWavefunction apply_J_squared(const TransverseWavefunction &v);

/// J_3 v = -i d/dphi v + (-i v_2, i v_1, 0), with the azimuthal derivative
/// taken exactly per ring by a discrete Fourier transform. Exact for samples
/// whose Cartesian components are trigonometric polynomials in phi of degree
/// < n_phi / 2, regardless of their theta dependence.
TransverseWavefunction apply_J3_azimuthal(const TransverseWavefunction &v);

/// L_l = J_l - S_l (spectral form required).
TransverseWavefunction apply_L(int l, const TransverseWavefunction &v);
/// L_3 = J_3 - S_3 with the azimuthal J_3.
TransverseWavefunction apply_L3_azimuthal(const TransverseWavefunction &v);

/// <e|f> in coefficient space with the radial weights of the grid.
cplx spectral_inner_product(const VshExpansion &e, const VshExpansion &f,
                            std::span<const double> radial_weights);

using Mat3 = std::array<std::array<double, 3>, 3>;

struct ObservableReport {
  double energy = 0.0;
  Vec3 momentum{};
  Vec3 total_am{};
  Vec3 oam{};
  Vec3 sam{};
  double helicity = 0.0;
  Mat3 sam_second_moments{};
  Mat3 sam_variance{};
  /// ||O v - <O> v|| / ||v|| per operator name.
  std::map<std::string, double> eigen_residuals;
};

struct ReportOptions {
  /// Truncation for the spectral J_1, J_2 expectation values; clamped to what
  /// the grid resolves.
  int l_max = 16;
  /// Allowed | ||v|| - 1 |.
  double norm_tolerance = 1e-8;
};

/// Expectation values, SAM second moments and variance for a unit-norm state.
/// J_3 and L_3 use the exact azimuthal route; J_1 and J_2 use the attached
/// spectral form if present, else an expansion at options.l_max.
ObservableReport observable_report(const TransverseWavefunction &v,
                                   const ReportOptions &options = {});

/// JSON object with the ObservableReport fields, scaled by hbar and c.
void write_report_json(std::ostream &out, const ObservableReport &r,
                       const Units &units = {});

} // namespace angmom
