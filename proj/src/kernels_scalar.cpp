#include "angmom/kernels.hpp"

namespace angmom::kernels {
namespace {

void khat_cross(std::size_t n, const double *const khat[3], const double *mult,
                cplx scale, FieldView in, FieldSpan out) {
  const double sr = scale.real(), si = scale.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = khat[0][i], ky = khat[1][i], kz = khat[2][i];
    const double m = mult ? mult[i] : 1.0;
    const double xr = in.re[0][i], yr = in.re[1][i], zr = in.re[2][i];
    const double xi = in.im[0][i], yi = in.im[1][i], zi = in.im[2][i];
    const double cr[3] = {ky * zr - kz * yr, kz * xr - kx * zr, kx * yr - ky * xr};
    const double ci[3] = {ky * zi - kz * yi, kz * xi - kx * zi, kx * yi - ky * xi};
    const double ar = m * sr, ai = m * si;
    for (int j = 0; j < 3; ++j) {
      out.re[j][i] = ar * cr[j] - ai * ci[j];
      out.im[j][i] = ar * ci[j] + ai * cr[j];
    }
  }
}

void scale_real(std::size_t n, const double *mult, cplx scale, FieldView in,
                FieldSpan out) {
  const double sr = scale.real(), si = scale.imag();
  for (int j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double m = mult ? mult[i] : 1.0;
      const double ar = m * sr, ai = m * si;
      const double r = in.re[j][i], im = in.im[j][i];
      out.re[j][i] = ar * r - ai * im;
      out.im[j][i] = ar * im + ai * r;
    }
  }
}

void project_transverse(std::size_t n, const double *const khat[3],
                        FieldView in, FieldSpan out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = khat[0][i], ky = khat[1][i], kz = khat[2][i];
    const double dr = kx * in.re[0][i] + ky * in.re[1][i] + kz * in.re[2][i];
    const double di = kx * in.im[0][i] + ky * in.im[1][i] + kz * in.im[2][i];
    const double k[3] = {kx, ky, kz};
    for (int j = 0; j < 3; ++j) {
      out.re[j][i] = in.re[j][i] - k[j] * dr;
      out.im[j][i] = in.im[j][i] - k[j] * di;
    }
  }
}

void axpy(std::size_t n, cplx a, FieldView x, FieldSpan y) {
  const double ar = a.real(), ai = a.imag();
  for (int j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = x.re[j][i], im = x.im[j][i];
      y.re[j][i] += ar * r - ai * im;
      y.im[j][i] += ar * im + ai * r;
    }
  }
}

cplx weighted_dot(std::size_t n, const double *w, FieldView u, FieldView v) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pr = 0.0, pi = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double ur = u.re[j][i], ui = u.im[j][i];
      const double vr = v.re[j][i], vi = v.im[j][i];
      pr += ur * vr + ui * vi;
      pi += ur * vi - ui * vr;
    }
    sr += w[i] * pr;
    si += w[i] * pi;
  }
  return {sr, si};
}

double weighted_longitudinal_norm2(std::size_t n, const double *w,
                                   const double *const khat[3], FieldView v) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr =
        khat[0][i] * v.re[0][i] + khat[1][i] * v.re[1][i] + khat[2][i] * v.re[2][i];
    const double di =
        khat[0][i] * v.im[0][i] + khat[1][i] * v.im[1][i] + khat[2][i] * v.im[2][i];
    s += w[i] * (dr * dr + di * di);
  }
  return s;
}

void cmul(std::size_t n, const double *a_re, const double *a_im,
          const double *b_re, const double *b_im, double *out_re,
          double *out_im) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = a_re[i] * b_re[i] - a_im[i] * b_im[i];
    const double im = a_re[i] * b_im[i] + a_im[i] * b_re[i];
    out_re[i] = r;
    out_im[i] = im;
  }
}

void plane_wave_block(std::size_t n_nodes, std::size_t n_sites,
                      const double *phase_re, const double *phase_im,
                      std::size_t n_fields, const double *const *coef_re,
                      const double *const *coef_im, double *acc_re,
                      double *acc_im) {
  for (std::size_t s = 0; s < n_sites; ++s) {
    const double *pr = phase_re + s * n_nodes;
    const double *pi = phase_im + s * n_nodes;
    for (std::size_t f = 0; f < n_fields; ++f) {
      const double *cr = coef_re[f];
      const double *ci = coef_im[f];
      double sr = 0.0, si = 0.0;
      for (std::size_t n = 0; n < n_nodes; ++n) {
        sr += pr[n] * cr[n] - pi[n] * ci[n];
        si += pr[n] * ci[n] + pi[n] * cr[n];
      }
      acc_re[s * n_fields + f] += sr;
      acc_im[s * n_fields + f] += si;
    }
  }
}

} // namespace

const KernelTable &scalar_table() {
  static const KernelTable table{"scalar",
                                 khat_cross,
                                 scale_real,
                                 project_transverse,
                                 axpy,
                                 weighted_dot,
                                 weighted_longitudinal_norm2,
                                 cmul,
                                 plane_wave_block};
  return table;
}

} // namespace angmom::kernels
