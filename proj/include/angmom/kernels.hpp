#pragma once

// Data-parallel inner loops over wave-vector nodes and lattice sites.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is chosen once at startup from CPUID; the
// environment variable PHOTON_ANGMOM_SIMD=scalar|avx2 overrides the choice.
// Fields are stored structure-of-arrays: three components, each split into
// separate real and imaginary arrays.

#include <cstddef>

#include "angmom/types.hpp"

namespace angmom::kernels {

struct FieldView {
  const double *re[3];
  const double *im[3];
};

struct FieldSpan {
  double *re[3];
  double *im[3];
};

/// Function table for one instruction-set level.
struct KernelTable {
  const char *name;

  /// out = scale * mult[i] * (khat[i] ^ in[i]); mult may be null (treated as 1).
  void (*khat_cross)(std::size_t n, const double *const khat[3],
                     const double *mult, cplx scale, FieldView in,
                     FieldSpan out);

  /// out = scale * mult[i] * in[i]; mult may be null.
  void (*scale_real)(std::size_t n, const double *mult, cplx scale,
                     FieldView in, FieldSpan out);

  /// out = in - khat (khat . in)
  void (*project_transverse)(std::size_t n, const double *const khat[3],
                             FieldView in, FieldSpan out);

  /// y += a * x
  void (*axpy)(std::size_t n, cplx a, FieldView x, FieldSpan y);

  /// sum_i w[i] * conj(u[i]) . v[i]
  cplx (*weighted_dot)(std::size_t n, const double *w, FieldView u,
                       FieldView v);

  /// sum_i w[i] * |khat[i] . v[i]|^2
  double (*weighted_longitudinal_norm2)(std::size_t n, const double *w,
                                        const double *const khat[3],
                                        FieldView v);

  /// out[i] = a[i] * b[i] for complex arrays.
  void (*cmul)(std::size_t n, const double *a_re, const double *a_im,
               const double *b_re, const double *b_im, double *out_re,
               double *out_im);

  /// Plane-wave accumulation for a block of sites:
  ///   acc[s * n_fields + f] += sum_n phase[s][n] * coef[f][n]
  /// phase rows are stored contiguously with stride n_nodes.
  void (*plane_wave_block)(std::size_t n_nodes, std::size_t n_sites,
                           const double *phase_re, const double *phase_im,
                           std::size_t n_fields, const double *const *coef_re,
                           const double *const *coef_im, double *acc_re,
                           double *acc_im);
};

const KernelTable &scalar_table();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable *avx2_table();

/// The table selected for this process.
const KernelTable &active();

/// Force a table by name ("scalar" or "avx2"); returns false if unavailable.
bool select(const char *name);

} // namespace angmom::kernels
