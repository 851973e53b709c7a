#pragma once

#include <cstddef>

#include "weylherm/common.hpp"

namespace weylherm::simd {

// Data-parallel inner loops of the solver. Complex arrays are interleaved
// (re, im) doubles. Every entry has a scalar reference implementation and an
// AVX2 variant selected at runtime; the two are equivalence-tested.
struct Kernels {
  const char* name;

  // y[i] += a * x[i] over n doubles (pass 2n for complex arrays)
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  // dst[j] += (-i a) src[j]
  void (*accum_neg_i)(double a, const cplx* src, cplx* dst, std::size_t n);

  // dst[j] += (-i a) p[j] src[j], p real
  void (*accum_neg_i_profile)(double a, const double* p, const cplx* src, cplx* dst,
                              std::size_t n);

  // Ladder push of one Hermite mode into its neighbours. With
  // h = vp[j] r[j]:
  //   up[j]   += (-i c_up)  (h + d[j])     [D r,      when up   != null]
  //   down[j] += (-i c_dn)  (h - d[j])     [D-star r, when down != null]
  void (*ladder_accum)(const cplx* r, const cplx* d, const double* vp, double c_up,
                       double c_dn, cplx* up, cplx* down, std::size_t n);

  // out[j] = s1 (f[j+1] - f[j-1]) + s2 (f[j+2] - f[j-2]), periodic wrap
  void (*stencil_periodic)(const cplx* f, cplx* out, double s1, double s2, std::size_t n);

  // sum_j f[j] conj(g[j])
  cplx (*dot_conj)(const cplx* f, const cplx* g, std::size_t n);

  // sum_j |f[j]|^2
  double (*norm_sq)(const cplx* f, std::size_t n);
};

const Kernels& scalar_kernels();

// Null when the build target has no AVX2 variant (non-x86).
const Kernels* avx2_kernels();

bool cpu_supports_avx2();

// AVX2 when compiled in and the CPU has it; WEYLHERM_SIMD=scalar forces the
// reference path. Resolved once per process.
const Kernels& active_kernels();

} // namespace weylherm::simd
