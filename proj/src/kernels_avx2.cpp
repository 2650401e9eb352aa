// Compiled with -mavx2 -mfma. Only reached after a CPUID check.

#include "angmom/kernels.hpp"

#include <immintrin.h>

namespace angmom::kernels {
namespace detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void khat_cross(std::size_t n, const double *const khat[3], const double *mult,
                cplx scale, FieldView in, FieldSpan out) {
  const double sr = scale.real(), si = scale.imag();
  const __m256d vsr = _mm256_set1_pd(sr), vsi = _mm256_set1_pd(si);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d kx = _mm256_loadu_pd(khat[0] + i);
    const __m256d ky = _mm256_loadu_pd(khat[1] + i);
    const __m256d kz = _mm256_loadu_pd(khat[2] + i);
    const __m256d m = mult ? _mm256_loadu_pd(mult + i) : _mm256_set1_pd(1.0);
    const __m256d ar = _mm256_mul_pd(m, vsr), ai = _mm256_mul_pd(m, vsi);
    __m256d c[2][3];
    for (int p = 0; p < 2; ++p) {
      const double *const *src = p == 0 ? in.re : in.im;
      const __m256d x = _mm256_loadu_pd(src[0] + i);
      const __m256d y = _mm256_loadu_pd(src[1] + i);
      const __m256d z = _mm256_loadu_pd(src[2] + i);
      c[p][0] = _mm256_fmsub_pd(ky, z, _mm256_mul_pd(kz, y));
      c[p][1] = _mm256_fmsub_pd(kz, x, _mm256_mul_pd(kx, z));
      c[p][2] = _mm256_fmsub_pd(kx, y, _mm256_mul_pd(ky, x));
    }
    for (int j = 0; j < 3; ++j) {
      _mm256_storeu_pd(out.re[j] + i,
                       _mm256_fmsub_pd(ar, c[0][j], _mm256_mul_pd(ai, c[1][j])));
      _mm256_storeu_pd(out.im[j] + i,
                       _mm256_fmadd_pd(ar, c[1][j], _mm256_mul_pd(ai, c[0][j])));
    }
  }
  for (; i < n; ++i) {
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
  const __m256d vsr = _mm256_set1_pd(sr), vsi = _mm256_set1_pd(si);
  for (int j = 0; j < 3; ++j) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d m = mult ? _mm256_loadu_pd(mult + i) : _mm256_set1_pd(1.0);
      const __m256d ar = _mm256_mul_pd(m, vsr), ai = _mm256_mul_pd(m, vsi);
      const __m256d r = _mm256_loadu_pd(in.re[j] + i);
      const __m256d im = _mm256_loadu_pd(in.im[j] + i);
      _mm256_storeu_pd(out.re[j] + i, _mm256_fmsub_pd(ar, r, _mm256_mul_pd(ai, im)));
      _mm256_storeu_pd(out.im[j] + i, _mm256_fmadd_pd(ar, im, _mm256_mul_pd(ai, r)));
    }
    for (; i < n; ++i) {
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
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d k[3] = {_mm256_loadu_pd(khat[0] + i),
                          _mm256_loadu_pd(khat[1] + i),
                          _mm256_loadu_pd(khat[2] + i)};
    for (int p = 0; p < 2; ++p) {
      const double *const *src = p == 0 ? in.re : in.im;
      double *const *dst = p == 0 ? out.re : out.im;
      const __m256d x = _mm256_loadu_pd(src[0] + i);
      const __m256d y = _mm256_loadu_pd(src[1] + i);
      const __m256d z = _mm256_loadu_pd(src[2] + i);
      const __m256d d = _mm256_fmadd_pd(
          k[2], z, _mm256_fmadd_pd(k[1], y, _mm256_mul_pd(k[0], x)));
      _mm256_storeu_pd(dst[0] + i, _mm256_fnmadd_pd(k[0], d, x));
      _mm256_storeu_pd(dst[1] + i, _mm256_fnmadd_pd(k[1], d, y));
      _mm256_storeu_pd(dst[2] + i, _mm256_fnmadd_pd(k[2], d, z));
    }
  }
  for (; i < n; ++i) {
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
  const __m256d var = _mm256_set1_pd(ar), vai = _mm256_set1_pd(ai);
  for (int j = 0; j < 3; ++j) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_loadu_pd(x.re[j] + i);
      const __m256d im = _mm256_loadu_pd(x.im[j] + i);
      __m256d yr = _mm256_loadu_pd(y.re[j] + i);
      __m256d yi = _mm256_loadu_pd(y.im[j] + i);
      yr = _mm256_add_pd(yr, _mm256_fmsub_pd(var, r, _mm256_mul_pd(vai, im)));
      yi = _mm256_add_pd(yi, _mm256_fmadd_pd(var, im, _mm256_mul_pd(vai, r)));
      _mm256_storeu_pd(y.re[j] + i, yr);
      _mm256_storeu_pd(y.im[j] + i, yi);
    }
    for (; i < n; ++i) {
      const double r = x.re[j][i], im = x.im[j][i];
      y.re[j][i] += ar * r - ai * im;
      y.im[j][i] += ar * im + ai * r;
    }
  }
}

cplx weighted_dot(std::size_t n, const double *w, FieldView u, FieldView v) {
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d pr = _mm256_setzero_pd(), pi = _mm256_setzero_pd();
    for (int j = 0; j < 3; ++j) {
      const __m256d ur = _mm256_loadu_pd(u.re[j] + i);
      const __m256d ui = _mm256_loadu_pd(u.im[j] + i);
      const __m256d vr = _mm256_loadu_pd(v.re[j] + i);
      const __m256d vi = _mm256_loadu_pd(v.im[j] + i);
      pr = _mm256_fmadd_pd(ur, vr, _mm256_fmadd_pd(ui, vi, pr));
      pi = _mm256_fmadd_pd(ur, vi, _mm256_fnmadd_pd(ui, vr, pi));
    }
    const __m256d wv = _mm256_loadu_pd(w + i);
    sr = _mm256_fmadd_pd(wv, pr, sr);
    si = _mm256_fmadd_pd(wv, pi, si);
  }
  double tr = hsum(sr), ti = hsum(si);
  for (; i < n; ++i) {
    double pr = 0.0, pi = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double ur = u.re[j][i], ui = u.im[j][i];
      const double vr = v.re[j][i], vi = v.im[j][i];
      pr += ur * vr + ui * vi;
      pi += ur * vi - ui * vr;
    }
    tr += w[i] * pr;
    ti += w[i] * pi;
  }
  return {tr, ti};
}

double weighted_longitudinal_norm2(std::size_t n, const double *w,
                                   const double *const khat[3], FieldView v) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d kx = _mm256_loadu_pd(khat[0] + i);
    const __m256d ky = _mm256_loadu_pd(khat[1] + i);
    const __m256d kz = _mm256_loadu_pd(khat[2] + i);
    const __m256d dr = _mm256_fmadd_pd(
        kz, _mm256_loadu_pd(v.re[2] + i),
        _mm256_fmadd_pd(ky, _mm256_loadu_pd(v.re[1] + i),
                        _mm256_mul_pd(kx, _mm256_loadu_pd(v.re[0] + i))));
    const __m256d di = _mm256_fmadd_pd(
        kz, _mm256_loadu_pd(v.im[2] + i),
        _mm256_fmadd_pd(ky, _mm256_loadu_pd(v.im[1] + i),
                        _mm256_mul_pd(kx, _mm256_loadu_pd(v.im[0] + i))));
    const __m256d m2 = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), m2, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
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
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ar = _mm256_loadu_pd(a_re + i), ai = _mm256_loadu_pd(a_im + i);
    const __m256d br = _mm256_loadu_pd(b_re + i), bi = _mm256_loadu_pd(b_im + i);
    _mm256_storeu_pd(out_re + i, _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi)));
    _mm256_storeu_pd(out_im + i, _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br)));
  }
  for (; i < n; ++i) {
    const double r = a_re[i] * b_re[i] - a_im[i] * b_im[i];
    const double im = a_re[i] * b_im[i] + a_im[i] * b_re[i];
    out_re[i] = r;
    out_im[i] = im;
  }
}

// One site against one field, four nodes per step with two accumulator pairs.
inline void dot_tail(std::size_t n0, std::size_t n_nodes, const double *pr,
                     const double *pi, const double *cr, const double *ci,
                     double &sr, double &si) {
  for (std::size_t n = n0; n < n_nodes; ++n) {
    sr += pr[n] * cr[n] - pi[n] * ci[n];
    si += pr[n] * ci[n] + pi[n] * cr[n];
  }
}

void plane_wave_block(std::size_t n_nodes, std::size_t n_sites,
                      const double *phase_re, const double *phase_im,
                      std::size_t n_fields, const double *const *coef_re,
                      const double *const *coef_im, double *acc_re,
                      double *acc_im) {
  const std::size_t n4 = n_nodes & ~std::size_t(3);
  std::size_t s = 0;
  // 2 sites x 2 fields register tile: 8 accumulators, each loaded value used twice.
  for (; s + 2 <= n_sites; s += 2) {
    const double *pr0 = phase_re + s * n_nodes, *pi0 = phase_im + s * n_nodes;
    const double *pr1 = pr0 + n_nodes, *pi1 = pi0 + n_nodes;
    std::size_t f = 0;
    for (; f + 2 <= n_fields; f += 2) {
      const double *cr0 = coef_re[f], *ci0 = coef_im[f];
      const double *cr1 = coef_re[f + 1], *ci1 = coef_im[f + 1];
      __m256d r00 = _mm256_setzero_pd(), i00 = _mm256_setzero_pd();
      __m256d r01 = _mm256_setzero_pd(), i01 = _mm256_setzero_pd();
      __m256d r10 = _mm256_setzero_pd(), i10 = _mm256_setzero_pd();
      __m256d r11 = _mm256_setzero_pd(), i11 = _mm256_setzero_pd();
      for (std::size_t n = 0; n < n4; n += 4) {
        const __m256d a0 = _mm256_loadu_pd(pr0 + n), b0 = _mm256_loadu_pd(pi0 + n);
        const __m256d a1 = _mm256_loadu_pd(pr1 + n), b1 = _mm256_loadu_pd(pi1 + n);
        const __m256d c0 = _mm256_loadu_pd(cr0 + n), d0 = _mm256_loadu_pd(ci0 + n);
        const __m256d c1 = _mm256_loadu_pd(cr1 + n), d1 = _mm256_loadu_pd(ci1 + n);
        r00 = _mm256_fmadd_pd(a0, c0, _mm256_fnmadd_pd(b0, d0, r00));
        i00 = _mm256_fmadd_pd(a0, d0, _mm256_fmadd_pd(b0, c0, i00));
        r01 = _mm256_fmadd_pd(a0, c1, _mm256_fnmadd_pd(b0, d1, r01));
        i01 = _mm256_fmadd_pd(a0, d1, _mm256_fmadd_pd(b0, c1, i01));
        r10 = _mm256_fmadd_pd(a1, c0, _mm256_fnmadd_pd(b1, d0, r10));
        i10 = _mm256_fmadd_pd(a1, d0, _mm256_fmadd_pd(b1, c0, i10));
        r11 = _mm256_fmadd_pd(a1, c1, _mm256_fnmadd_pd(b1, d1, r11));
        i11 = _mm256_fmadd_pd(a1, d1, _mm256_fmadd_pd(b1, c1, i11));
      }
      double t[8] = {hsum(r00), hsum(i00), hsum(r01), hsum(i01),
                     hsum(r10), hsum(i10), hsum(r11), hsum(i11)};
      dot_tail(n4, n_nodes, pr0, pi0, cr0, ci0, t[0], t[1]);
      dot_tail(n4, n_nodes, pr0, pi0, cr1, ci1, t[2], t[3]);
      dot_tail(n4, n_nodes, pr1, pi1, cr0, ci0, t[4], t[5]);
      dot_tail(n4, n_nodes, pr1, pi1, cr1, ci1, t[6], t[7]);
      acc_re[s * n_fields + f] += t[0];
      acc_im[s * n_fields + f] += t[1];
      acc_re[s * n_fields + f + 1] += t[2];
      acc_im[s * n_fields + f + 1] += t[3];
      acc_re[(s + 1) * n_fields + f] += t[4];
      acc_im[(s + 1) * n_fields + f] += t[5];
      acc_re[(s + 1) * n_fields + f + 1] += t[6];
      acc_im[(s + 1) * n_fields + f + 1] += t[7];
    }
    for (; f < n_fields; ++f) {
      for (int q = 0; q < 2; ++q) {
        const double *pr = q ? pr1 : pr0, *pi = q ? pi1 : pi0;
        __m256d r = _mm256_setzero_pd(), im = _mm256_setzero_pd();
        for (std::size_t n = 0; n < n4; n += 4) {
          const __m256d a = _mm256_loadu_pd(pr + n), b = _mm256_loadu_pd(pi + n);
          const __m256d c = _mm256_loadu_pd(coef_re[f] + n);
          const __m256d d = _mm256_loadu_pd(coef_im[f] + n);
          r = _mm256_fmadd_pd(a, c, _mm256_fnmadd_pd(b, d, r));
          im = _mm256_fmadd_pd(a, d, _mm256_fmadd_pd(b, c, im));
        }
        double tr = hsum(r), ti = hsum(im);
        dot_tail(n4, n_nodes, pr, pi, coef_re[f], coef_im[f], tr, ti);
        acc_re[(s + q) * n_fields + f] += tr;
        acc_im[(s + q) * n_fields + f] += ti;
      }
    }
  }
  for (; s < n_sites; ++s) {
    const double *pr = phase_re + s * n_nodes, *pi = phase_im + s * n_nodes;
    for (std::size_t f = 0; f < n_fields; ++f) {
      __m256d r = _mm256_setzero_pd(), im = _mm256_setzero_pd();
      for (std::size_t n = 0; n < n4; n += 4) {
        const __m256d a = _mm256_loadu_pd(pr + n), b = _mm256_loadu_pd(pi + n);
        const __m256d c = _mm256_loadu_pd(coef_re[f] + n);
        const __m256d d = _mm256_loadu_pd(coef_im[f] + n);
        r = _mm256_fmadd_pd(a, c, _mm256_fnmadd_pd(b, d, r));
        im = _mm256_fmadd_pd(a, d, _mm256_fmadd_pd(b, c, im));
      }
      double tr = hsum(r), ti = hsum(im);
      dot_tail(n4, n_nodes, pr, pi, coef_re[f], coef_im[f], tr, ti);
      acc_re[s * n_fields + f] += tr;
      acc_im[s * n_fields + f] += ti;
    }
  }
}

} // namespace

const KernelTable &avx2_table_impl() {
  static const KernelTable table{"avx2",
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

} // namespace detail
} // namespace angmom::kernels
