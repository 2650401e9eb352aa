#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "angmom/wavefunction.hpp"

namespace angmom {

/// Regular box of sample points with trapezoid weights. Site (ix, iy, iz) sits
/// at origin + (ix, iy, iz) * spacing, spacing = extents / (n - 1). With
/// mask_radius > 0 only sites within that distance of the box center are used,
/// all with the full cell weight.
struct SpaceTimeLattice {
  Vec3 origin{-8.0, -8.0, -8.0};
  Vec3 extents{16.0, 16.0, 16.0};
  std::array<int, 3> n{64, 64, 64};
  std::vector<double> times{0.0};
  double mask_radius = 0.0;

  Vec3 spacing() const;
  Vec3 center() const;
  void validate() const;

  /// Cube of the given side centered at the coordinate origin.
  static SpaceTimeLattice centered_cube(double side, int n_per_axis);
  /// Box centered at the origin with the given spacing and a spherical mask of
  /// radius R (the box is the smallest lattice enclosing the ball).
  static SpaceTimeLattice ball(double radius, double spacing);
};

struct SynthesisOptions {
  bool magnetic = true;
  /// Also synthesize d_b A_m, needed by real_space_com.
  bool gradient = false;
  /// Aliasing (spacing >= pi / k_max) throws NumericalError instead of warning.
  bool strict_aliasing = false;
  /// Nodes whose quadrature-weighted amplitude is below this fraction of the
  /// largest one are skipped.
  double node_cutoff = 1e-17;
};

/// Analytic-signal fields at one time on the (masked) lattice sites.
struct FieldSnapshot {
  double t = 0.0;
  std::vector<std::array<int, 3>> index;
  std::vector<Vec3> position;
  std::vector<double> weight;
  std::vector<CVec3> A, E, B;
  /// dA[s][b] = d_b A (vector over m)
  std::vector<std::array<CVec3, 3>> dA;

  std::size_t size() const { return position.size(); }
};

/// Aliasing test: true when every lattice spacing is below pi / k_max.
bool resolves(const SpaceTimeLattice &lattice, double k_max);

/// Direct plane-wave quadrature of A, E (and B, grad A) at time t, c = 1:
/// A = (1/2pi) sum w v e^{i(k.x - omega t)} / sqrt(omega), E = i omega A mode-wise,
/// B = curl A and d_b A with i k inserted analytically.
FieldSnapshot synthesize_fields(const TransverseWavefunction &v,
                                const SpaceTimeLattice &lattice, double t,
                                const SynthesisOptions &options = {});

/// The seven constants of motion (with L and S separately).
struct ConstantsOfMotion {
  double energy = 0.0;
  Vec3 momentum{};
  Vec3 total_am{};
  Vec3 oam{};
  Vec3 sam{};
};

/// Lattice quadrature of the real-space integrands (needs E, A and dA).
ConstantsOfMotion real_space_com(const FieldSnapshot &s);

/// The same quantities as wave-vector integrals. J_3 uses the exact azimuthal
/// derivative, J_1 and J_2 a spectral expansion at l_max (clamped to the grid).
ConstantsOfMotion kspace_com(const TransverseWavefunction &v, int l_max = 16);

struct ComComparison {
  ConstantsOfMotion real, kspace;
  /// per quantity |real - kspace| / scale; momenta scale with P^0, angular
  /// momenta with ||v||^2
  std::array<double, 13> rel_error{};
  double max_rel_error = 0.0;
};

ComComparison compare_com(const ConstantsOfMotion &real, const ConstantsOfMotion &kspace,
                          double norm2);

/// Names in the order used by ComComparison::rel_error.
const std::array<const char *, 13> &com_names();
std::array<double, 13> com_values(const ConstantsOfMotion &c);

/// Recomputes the real-space COM on a lattice with doubled extents (same
/// spacing) and reports the largest relative shift.
double extent_convergence_shift(const TransverseWavefunction &v,
                                const SpaceTimeLattice &lattice, double t = 0.0);

/// Little-endian f64 (re, im) pairs, site-major, components A1..3 E1..3 B1..3.
void write_fields_binary(std::ostream &out, const FieldSnapshot &s);
/// Sidecar describing the lattice and layout of write_fields_binary.
void write_fields_sidecar(std::ostream &out, const SpaceTimeLattice &lattice,
                          const FieldSnapshot &s);
/// CSV of the sites in the lattice plane iz (x,y,z then re/im of A, E, B).
void write_field_slice_csv(std::ostream &out, const FieldSnapshot &s, int iz);

} // namespace angmom
