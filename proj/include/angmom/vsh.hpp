#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "angmom/wavefunction.hpp"

namespace angmom {

/// Orthonormal associated Legendre functions with the Condon-Shortley phase,
/// Y_lm(theta, phi) = Pbar_lm(cos theta) e^{i m phi} for m >= 0.
/// Filled for 0 <= m <= l <= l_max at index l (l + 1) / 2 + m.
void normalized_legendre(int l_max, double x, std::vector<double> &out);

inline std::size_t legendre_index(int l, int m) {
  return std::size_t(l) * (l + 1) / 2 + m;
}

/// Orthonormal spherical harmonic, Condon-Shortley phase.
cplx scalar_ylm(int l, int m, double theta, double phi);

/// (Y^(1)_lm, Y^(2)_lm) at a direction; Y^(2) = khat ^ Y^(1).
std::pair<CVec3, CVec3> vsh_pair(int l, int m, double theta, double phi);

/// Coefficients over (a, l, m), 1 <= l <= l_max, each a radial profile on the
/// grid's radial nodes.
class VshExpansion {
public:
  VshExpansion(int l_max, int n_radial);

  int l_max() const { return l_max_; }
  int n_radial() const { return n_radial_; }

  static std::size_t term_count(int l_max) {
    return std::size_t(l_max + 1) * (l_max + 1) - 1;
  }
  static std::size_t term(int l, int m) { return std::size_t(l * l + l + m - 1); }

  cplx &at(int a, int l, int m, int ik) { return data_[offset(a, l, m) + ik]; }
  cplx at(int a, int l, int m, int ik) const { return data_[offset(a, l, m) + ik]; }
  std::span<cplx> radial(int a, int l, int m) {
    return {data_.data() + offset(a, l, m), std::size_t(n_radial_)};
  }
  std::span<const cplx> radial(int a, int l, int m) const {
    return {data_.data() + offset(a, l, m), std::size_t(n_radial_)};
  }

  std::vector<cplx> &data() { return data_; }
  const std::vector<cplx> &data() const { return data_; }

  VshExpansion &operator*=(cplx s);
  /// this += s * other (same shape required)
  void axpy(cplx s, const VshExpansion &other);
  bool same_shape(const VshExpansion &o) const {
    return l_max_ == o.l_max_ && n_radial_ == o.n_radial_;
  }

  /// sum over terms of radial-weighted |c|^2
  double norm2(std::span<const double> radial_weights) const;

private:
  std::size_t offset(int a, int l, int m) const {
    return ((std::size_t(a - 1) * term_count(l_max_)) + term(l, m)) * n_radial_;
  }

  int l_max_;
  int n_radial_;
  std::vector<cplx> data_;
};

/// Largest l_max the grid resolves exactly for bandlimited input.
int max_resolved_l(const WaveVectorGrid &grid);

/// Projects v onto Y^(a)_lm per radial shell. Requires n_theta >= l_max + 1 and
/// n_phi >= 2 l_max + 1.
VshExpansion analyze(const TransverseWavefunction &v, int l_max);

/// Pointwise sum of coefficients times Y^(a)_lm; the result carries e as its
/// spectral form.
TransverseWavefunction synthesize(const VshExpansion &e, GridPtr grid);

/// Attaches analyze(v, l_max) as the spectral form.
TransverseWavefunction with_spectral(const TransverseWavefunction &v, int l_max);

/// JSON array of {"a","l","m","radial":[[re,im],...]}.
void write_expansion_json(std::ostream &out, const VshExpansion &e);

} // namespace angmom
