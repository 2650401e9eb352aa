#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "angmom/grid.hpp"
#include "angmom/kernels.hpp"

namespace angmom {

class VshExpansion;
using ExpansionPtr = std::shared_ptr<const VshExpansion>;

/// Complex 3-vector per node, stored as six contiguous double arrays.
class VectorSamples {
public:
  VectorSamples() = default;
  explicit VectorSamples(std::size_t n);

  std::size_t size() const { return re_[0].size(); }

  CVec3 at(std::size_t i) const {
    return {cplx(re_[0][i], im_[0][i]), cplx(re_[1][i], im_[1][i]),
            cplx(re_[2][i], im_[2][i])};
  }
  void set(std::size_t i, const CVec3 &v) {
    for (int c = 0; c < 3; ++c) {
      re_[c][i] = v[c].real();
      im_[c][i] = v[c].imag();
    }
  }

  double *re(int c) { return re_[c].data(); }
  double *im(int c) { return im_[c].data(); }
  const double *re(int c) const { return re_[c].data(); }
  const double *im(int c) const { return im_[c].data(); }

  kernels::FieldView view() const {
    return {{re_[0].data(), re_[1].data(), re_[2].data()},
            {im_[0].data(), im_[1].data(), im_[2].data()}};
  }
  kernels::FieldSpan span() {
    return {{re_[0].data(), re_[1].data(), re_[2].data()},
            {im_[0].data(), im_[1].data(), im_[2].data()}};
  }

  double max_abs() const;

private:
  std::vector<double> re_[3], im_[3];
};

/// One-photon wavefunction v(k) sampled on a wave-vector grid. The samples are
/// authoritative for integrals; an attached vector-spherical-harmonic expansion,
/// when present, is used for the differential (J, L) actions.
class TransverseWavefunction {
public:
  static constexpr double kDefaultTolerance = 1e-10;

  /// Validates k.v = 0 at every node to rel_tol (relative to |v| at that node).
  TransverseWavefunction(GridPtr grid, VectorSamples values,
                         double rel_tol = kDefaultTolerance);

  /// No transversality check; the residual is measured and stored.
  static TransverseWavefunction measured(GridPtr grid, VectorSamples values);
  static TransverseWavefunction zero(GridPtr grid);

  const WaveVectorGrid &grid() const { return *grid_; }
  const GridPtr &grid_ptr() const { return grid_; }
  const VectorSamples &values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  CVec3 at(std::size_t i) const { return values_.at(i); }

  /// max over nodes of |khat . v| / |v|.
  double transversality_residual() const { return residual_; }

  const ExpansionPtr &spectral() const { return spectral_; }
  bool has_spectral() const { return static_cast<bool>(spectral_); }
  TransverseWavefunction with_spectral(ExpansionPtr e) const;
  TransverseWavefunction without_spectral() const;

private:
  struct Unchecked {};
  TransverseWavefunction(Unchecked, GridPtr grid, VectorSamples values,
                         double residual, ExpansionPtr spectral);
  friend TransverseWavefunction combine(cplx, const TransverseWavefunction &,
                                        cplx, const TransverseWavefunction &);
  friend TransverseWavefunction operator*(cplx, const TransverseWavefunction &);

  GridPtr grid_;
  VectorSamples values_;
  double residual_ = 0.0;
  ExpansionPtr spectral_;
};

double transversality_residual(const WaveVectorGrid &grid, const VectorSamples &v);

/// Pointwise (delta_jl - khat_j khat_l) raw_l.
TransverseWavefunction project_transverse(GridPtr grid, const VectorSamples &raw);
TransverseWavefunction project_transverse(const TransverseWavefunction &v);

/// Integral of u* . v over the grid.
cplx inner_product(const TransverseWavefunction &u, const TransverseWavefunction &v);
double norm(const TransverseWavefunction &v);
TransverseWavefunction normalize(const TransverseWavefunction &v);

/// a u + b v. Spectral forms are combined when both operands carry one of the
/// same truncation, otherwise dropped.
TransverseWavefunction combine(cplx a, const TransverseWavefunction &u, cplx b,
                               const TransverseWavefunction &v);
TransverseWavefunction operator*(cplx s, const TransverseWavefunction &v);
TransverseWavefunction operator+(const TransverseWavefunction &u,
                                 const TransverseWavefunction &v);
TransverseWavefunction operator-(const TransverseWavefunction &u,
                                 const TransverseWavefunction &v);

/// CSV dump: k,theta,phi,re_v1,im_v1,re_v2,im_v2,re_v3,im_v3 in node order.
void write_csv(std::ostream &out, const TransverseWavefunction &v);

} // namespace angmom
