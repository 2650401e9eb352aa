#include "angmom/operators.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "angmom/parallel.hpp"

namespace angmom {

namespace {

void check_axis(int l, int lo, const char *where) {
  if (l < lo || l > 3)
    throw ConfigError(std::string(where) + ": axis index out of range");
}

TransverseWavefunction pointwise_cross(const TransverseWavefunction &v,
                                       const double *mult, cplx scale) {
  const auto &g = v.grid();
  VectorSamples out(v.size());
  kernels::active().khat_cross(v.size(), g.khat_ptrs(), mult, scale,
                               v.values().view(), out.span());
  return TransverseWavefunction::measured(v.grid_ptr(), std::move(out));
}

} // namespace

TransverseWavefunction apply_S(int l, const TransverseWavefunction &v) {
  check_axis(l, 1, "apply_S");
  return pointwise_cross(v, v.grid().khat(l - 1).data(), kI);
}

TransverseWavefunction apply_W(const TransverseWavefunction &v) {
  return pointwise_cross(v, nullptr, kI);
}

TransverseWavefunction apply_P(int l, const TransverseWavefunction &v) {
  check_axis(l, 0, "apply_P");
  const auto &g = v.grid();
  std::vector<double> mult(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    mult[i] = l == 0 ? g.k()[i] : g.k()[i] * g.khat(l - 1)[i];
  VectorSamples out(v.size());
  kernels::active().scale_real(v.size(), mult.data(), 1.0, v.values().view(),
                               out.span());
  return TransverseWavefunction::measured(v.grid_ptr(), std::move(out));
}

namespace {

inline double raise(int l, int m) { // coefficient of |l, m+1> in J+ |l, m>
  return std::sqrt(std::max(0.0, double(l) * (l + 1) - double(m) * (m + 1)));
}
inline double lower(int l, int m) { // coefficient of |l, m-1> in J- |l, m>
  return std::sqrt(std::max(0.0, double(l) * (l + 1) - double(m) * (m - 1)));
}

} // namespace

VshExpansion apply_J(int l, const VshExpansion &e) {
  check_axis(l, 1, "apply_J");
  VshExpansion out(e.l_max(), e.n_radial());
  const int nr = e.n_radial();
  for (int a = 1; a <= 2; ++a) {
    for (int L = 1; L <= e.l_max(); ++L) {
      for (int m = -L; m <= L; ++m) {
        auto dst = out.radial(a, L, m);
        if (l == 3) {
          const auto src = e.radial(a, L, m);
          for (int ik = 0; ik < nr; ++ik) dst[ik] = double(m) * src[ik];
          continue;
        }
        // (J+ c)_m = raise(L, m-1) c_{m-1}, (J- c)_m = lower(L, m+1) c_{m+1}
        const double up = m - 1 >= -L ? raise(L, m - 1) : 0.0;
        const double dn = m + 1 <= L ? lower(L, m + 1) : 0.0;
        for (int ik = 0; ik < nr; ++ik) {
          const cplx jp = up != 0.0 ? up * e.at(a, L, m - 1, ik) : cplx(0.0);
          const cplx jm = dn != 0.0 ? dn * e.at(a, L, m + 1, ik) : cplx(0.0);
          dst[ik] = l == 1 ? 0.5 * (jp + jm) : (jp - jm) / (2.0 * kI);
        }
      }
    }
  }
  return out;
}

VshExpansion apply_J_squared(const VshExpansion &e) {
  VshExpansion out(e.l_max(), e.n_radial());
  for (int l = 1; l <= 3; ++l) out.axpy(1.0, apply_J(l, apply_J(l, e)));
  return out;
}

namespace {

const VshExpansion &require_spectral(const TransverseWavefunction &v,
                                     const char *where) {
  if (!v.spectral())
    throw ConfigError(std::string(where) +
                      ": state carries no spectral form (attach one with with_spectral)");
  return *v.spectral();
}

} // namespace

TransverseWavefunction apply_J(int l, const TransverseWavefunction &v) {
  return synthesize(apply_J(l, require_spectral(v, "apply_J")), v.grid_ptr());
}

TransverseWavefunction apply_J_squared(const TransverseWavefunction &v) {
  return synthesize(apply_J_squared(require_spectral(v, "apply_J_squared")),
                    v.grid_ptr());
}

TransverseWavefunction apply_J3_azimuthal(const TransverseWavefunction &v) {
  const auto &g = v.grid();
  const int np = g.n_phi();
  std::vector<cplx> tw(np);
  for (int j = 0; j < np; ++j) tw[j] = std::polar(1.0, 2.0 * kPi * j / np);
  // symmetric frequency range; the Nyquist term (even n_phi) has no derivative
  const int qmax = (np - 1) / 2;
  VectorSamples out(v.size());
  const VectorSamples &in = v.values();

  parallel_for(g.ring_count(), [&](std::size_t r0, std::size_t r1) {
    std::vector<cplx> coef(2 * qmax + 1), vals(np);
    for (std::size_t r = r0; r < r1; ++r) {
      const std::size_t base = r * np;
      for (int c = 0; c < 3; ++c) {
        for (int ip = 0; ip < np; ++ip)
          vals[ip] = cplx(in.re(c)[base + ip], in.im(c)[base + ip]);
        for (int q = -qmax; q <= qmax; ++q) {
          cplx s = 0.0;
          for (int ip = 0; ip < np; ++ip) {
            long long j = (static_cast<long long>(q) * ip) % np;
            if (j < 0) j += np;
            s += vals[ip] * std::conj(tw[j]);
          }
          coef[q + qmax] = s * (double(q) / np);
        }
        for (int ip = 0; ip < np; ++ip) {
          cplx s = 0.0;
          for (int q = -qmax; q <= qmax; ++q) {
            long long j = (static_cast<long long>(q) * ip) % np;
            if (j < 0) j += np;
            s += coef[q + qmax] * tw[j];
          }
          out.re(c)[base + ip] = s.real();
          out.im(c)[base + ip] = s.imag();
        }
      }
      // spin part: (-i v2, i v1, 0)
      for (int ip = 0; ip < np; ++ip) {
        const std::size_t i = base + ip;
        out.re(0)[i] += in.im(1)[i];
        out.im(0)[i] -= in.re(1)[i];
        out.re(1)[i] -= in.im(0)[i];
        out.im(1)[i] += in.re(0)[i];
      }
    }
  });
  return TransverseWavefunction::measured(v.grid_ptr(), std::move(out));
}

TransverseWavefunction apply_L(int l, const TransverseWavefunction &v) {
  check_axis(l, 1, "apply_L");
  const TransverseWavefunction j = apply_J(l, v);
  return combine(1.0, j.without_spectral(), -1.0, apply_S(l, v));
}

TransverseWavefunction apply_L3_azimuthal(const TransverseWavefunction &v) {
  return apply_J3_azimuthal(v) - apply_S(3, v);
}

cplx spectral_inner_product(const VshExpansion &e, const VshExpansion &f,
                            std::span<const double> radial_weights) {
  if (!e.same_shape(f)) throw ConfigError("spectral_inner_product: shape mismatch");
  if (radial_weights.size() != std::size_t(e.n_radial()))
    throw ConfigError("spectral_inner_product: radial weight count mismatch");
  const auto &a = e.data();
  const auto &b = f.data();
  const std::size_t nr = e.n_radial();
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += radial_weights[i % nr] * std::conj(a[i]) * b[i];
  return s;
}

namespace {

double eigen_residual(const TransverseWavefunction &v, const TransverseWavefunction &ov,
                      double lambda, double vnorm) {
  return norm(combine(1.0, ov, -lambda, v)) / vnorm;
}

} // namespace

ObservableReport observable_report(const TransverseWavefunction &v,
                                   const ReportOptions &options) {
  const double vnorm = norm(v);
  if (std::abs(vnorm - 1.0) > options.norm_tolerance)
    throw ConfigError("observable_report: state is not normalized (||v|| = " +
                      std::to_string(vnorm) + ")");
  ObservableReport r;
  r.energy = inner_product(v, apply_P(0, v)).real();

  TransverseWavefunction s[3] = {apply_S(1, v), apply_S(2, v), apply_S(3, v)};
  for (int j = 0; j < 3; ++j) {
    r.momentum[j] = inner_product(v, apply_P(j + 1, v)).real();
    r.sam[j] = inner_product(v, s[j]).real();
  }
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      r.sam_second_moments[j][l] = inner_product(s[j], s[l]).real();
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      r.sam_variance[j][l] = r.sam_second_moments[j][l] - r.sam[j] * r.sam[l];

  const TransverseWavefunction w = apply_W(v);
  r.helicity = inner_product(v, w).real();

  const TransverseWavefunction j3 = apply_J3_azimuthal(v);
  r.total_am[2] = inner_product(v, j3).real();

  ExpansionPtr spectral = v.spectral();
  if (!spectral) {
    const int l_max = std::min(options.l_max, max_resolved_l(v.grid()));
    if (l_max >= 1) spectral = std::make_shared<const VshExpansion>(analyze(v, l_max));
  }
  if (spectral) {
    const auto &rw = v.grid().radial_weights();
    for (int j = 1; j <= 2; ++j)
      r.total_am[j - 1] = spectral_inner_product(*spectral, apply_J(j, *spectral), rw).real();
  }
  for (int j = 0; j < 3; ++j) r.oam[j] = r.total_am[j] - r.sam[j];

  r.eigen_residuals["J3"] = eigen_residual(v, j3, r.total_am[2], vnorm);
  r.eigen_residuals["W"] = eigen_residual(v, w, r.helicity, vnorm);
  r.eigen_residuals["S3"] = eigen_residual(v, s[2], r.sam[2], vnorm);
  r.eigen_residuals["L3"] =
      eigen_residual(v, combine(1.0, j3, -1.0, s[2]), r.oam[2], vnorm);
  if (v.spectral()) {
    const auto &e = *v.spectral();
    const auto &rw = v.grid().radial_weights();
    const VshExpansion j2 = apply_J_squared(e);
    const double en = std::sqrt(std::max(0.0, spectral_inner_product(e, e, rw).real()));
    if (en > 0.0) {
      const double lambda = spectral_inner_product(e, j2, rw).real() / (en * en);
      VshExpansion d = j2;
      d.axpy(-lambda, e);
      r.eigen_residuals["J2"] = std::sqrt(d.norm2(rw)) / en;
    }
  }
  return r;
}

void write_report_json(std::ostream &out, const ObservableReport &r,
                       const Units &units) {
  const double h = units.hbar, c = units.c;
  auto vec = [](const Vec3 &x, double s) {
    return nlohmann::json::array({x[0] * s, x[1] * s, x[2] * s});
  };
  auto mat = [](const Mat3 &m, double s) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &row : m) a.push_back({row[0] * s, row[1] * s, row[2] * s});
    return a;
  };
  nlohmann::json j;
  j["energy"] = r.energy * h * c;
  j["momentum"] = vec(r.momentum, h);
  j["total_am"] = vec(r.total_am, h);
  j["oam"] = vec(r.oam, h);
  j["sam"] = vec(r.sam, h);
  j["helicity"] = r.helicity * h;
  j["sam_second_moments"] = mat(r.sam_second_moments, h * h);
  j["sam_variance"] = mat(r.sam_variance, h * h);
  nlohmann::json res = nlohmann::json::object();
  for (const auto &[k, x] : r.eigen_residuals) res[k] = x;
  j["eigen_residuals"] = res;
  out << j.dump(2) << '\n';
}

} // namespace angmom
