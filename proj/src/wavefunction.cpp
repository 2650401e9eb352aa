#include "angmom/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "angmom/vsh.hpp"

namespace angmom {

VectorSamples::VectorSamples(std::size_t n) {
  for (int c = 0; c < 3; ++c) {
    re_[c].assign(n, 0.0);
    im_[c].assign(n, 0.0);
  }
}

double VectorSamples::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max(m, angmom::norm(at(i)));
  return m;
}

double transversality_residual(const WaveVectorGrid &grid, const VectorSamples &v) {
  double worst = 0.0;
  const double floor = v.max_abs() * 1e-300;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const CVec3 x = v.at(i);
    const double n = angmom::norm(x);
    if (n <= floor || n == 0.0) continue;
    worst = std::max(worst, std::abs(dot(grid.khat_at(i), x)) / n);
  }
  return worst;
}

TransverseWavefunction::TransverseWavefunction(GridPtr grid, VectorSamples values,
                                               double rel_tol)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("wavefunction: null grid");
  if (values_.size() != grid_->size())
    throw ConfigError("wavefunction: sample count does not match the grid");
  residual_ = angmom::transversality_residual(*grid_, values_);
  if (residual_ > rel_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "wavefunction: transversality residual %.3e exceeds tolerance %.1e",
                  residual_, rel_tol);
    throw ConfigError(buf);
  }
}

TransverseWavefunction::TransverseWavefunction(Unchecked, GridPtr grid,
                                               VectorSamples values, double residual,
                                               ExpansionPtr spectral)
    : grid_(std::move(grid)), values_(std::move(values)), residual_(residual),
      spectral_(std::move(spectral)) {}

TransverseWavefunction TransverseWavefunction::measured(GridPtr grid,
                                                        VectorSamples values) {
  if (!grid) throw ConfigError("wavefunction: null grid");
  if (values.size() != grid->size())
    throw ConfigError("wavefunction: sample count does not match the grid");
  const double r = angmom::transversality_residual(*grid, values);
  return TransverseWavefunction(Unchecked{}, std::move(grid), std::move(values), r,
                                nullptr);
}

TransverseWavefunction TransverseWavefunction::zero(GridPtr grid) {
  const std::size_t n = grid->size();
  return TransverseWavefunction(Unchecked{}, std::move(grid), VectorSamples(n), 0.0,
                                nullptr);
}

TransverseWavefunction TransverseWavefunction::with_spectral(ExpansionPtr e) const {
  if (e && e->n_radial() != grid_->n_k())
    throw ConfigError("wavefunction: expansion radial size does not match the grid");
  return TransverseWavefunction(Unchecked{}, grid_, values_, residual_, std::move(e));
}

TransverseWavefunction TransverseWavefunction::without_spectral() const {
  return TransverseWavefunction(Unchecked{}, grid_, values_, residual_, nullptr);
}

TransverseWavefunction project_transverse(GridPtr grid, const VectorSamples &raw) {
  if (raw.size() != grid->size())
    throw ConfigError("project_transverse: sample count does not match the grid");
  VectorSamples out(raw.size());
  kernels::active().project_transverse(raw.size(), grid->khat_ptrs(), raw.view(),
                                       out.span());
  return TransverseWavefunction::measured(std::move(grid), std::move(out));
}

TransverseWavefunction project_transverse(const TransverseWavefunction &v) {
  return project_transverse(v.grid_ptr(), v.values());
}

cplx inner_product(const TransverseWavefunction &u, const TransverseWavefunction &v) {
  if (!u.grid().same_as(v.grid()))
    throw ConfigError("inner_product: operands live on different grids");
  return kernels::active().weighted_dot(u.size(), u.grid().weights().data(),
                                        u.values().view(), v.values().view());
}

double norm(const TransverseWavefunction &v) {
  return std::sqrt(std::max(0.0, inner_product(v, v).real()));
}

TransverseWavefunction normalize(const TransverseWavefunction &v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw NumericalError("normalize: zero-norm state");
  return cplx(1.0 / n) * v;
}

TransverseWavefunction combine(cplx a, const TransverseWavefunction &u, cplx b,
                               const TransverseWavefunction &v) {
  if (!u.grid().same_as(v.grid()))
    throw ConfigError("combine: operands live on different grids");
  VectorSamples out(u.size());
  const auto &k = kernels::active();
  k.scale_real(u.size(), nullptr, a, u.values().view(), out.span());
  k.axpy(u.size(), b, v.values().view(), out.span());

  ExpansionPtr spectral;
  if (u.spectral() && v.spectral() && u.spectral()->same_shape(*v.spectral())) {
    auto e = std::make_shared<VshExpansion>(*u.spectral());
    *e *= a;
    e->axpy(b, *v.spectral());
    spectral = std::move(e);
  }
  const double r = transversality_residual(u.grid(), out);
  return TransverseWavefunction(TransverseWavefunction::Unchecked{}, u.grid_ptr(),
                                std::move(out), r, std::move(spectral));
}

TransverseWavefunction operator*(cplx s, const TransverseWavefunction &v) {
  VectorSamples out(v.size());
  kernels::active().scale_real(v.size(), nullptr, s, v.values().view(), out.span());
  ExpansionPtr spectral;
  if (v.spectral()) {
    auto e = std::make_shared<VshExpansion>(*v.spectral());
    *e *= s;
    spectral = std::move(e);
  }
  return TransverseWavefunction(TransverseWavefunction::Unchecked{}, v.grid_ptr(),
                                std::move(out), v.transversality_residual(),
                                std::move(spectral));
}

TransverseWavefunction operator+(const TransverseWavefunction &u,
                                 const TransverseWavefunction &v) {
  return combine(1.0, u, 1.0, v);
}

TransverseWavefunction operator-(const TransverseWavefunction &u,
                                 const TransverseWavefunction &v) {
  return combine(1.0, u, -1.0, v);
}

void write_csv(std::ostream &out, const TransverseWavefunction &v) {
  out << "k,theta,phi,re_v1,im_v1,re_v2,im_v2,re_v3,im_v3\n";
  const auto &g = v.grid();
  char buf[512];
  for (std::size_t i = 0; i < v.size(); ++i) {
    const CVec3 x = v.at(i);
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  g.k()[i], g.theta()[i], g.phi()[i], x[0].real(), x[0].imag(),
                  x[1].real(), x[1].imag(), x[2].real(), x[2].imag());
    out << buf;
  }
}

} // namespace angmom
