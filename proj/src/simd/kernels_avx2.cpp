// AVX2/FMA variants of the solver inner loops. Complex doubles are processed
// two at a time as [re0, im0, re1, im1]; multiplying by -i*a is a within-lane
// swap followed by a multiply with the sign pattern [a, -a, a, -a].

#include "weylherm/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace weylherm::simd {

namespace {

inline __m256d dup_pair(const double* p) {
  // [p0, p1] -> [p0, p0, p1, p1]
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(p)), 0x50);
}

inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0x5); }

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, xv, yv));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void accum_neg_i_avx2(double a, const cplx* src, cplx* dst, std::size_t n) {
  const double* s = reinterpret_cast<const double*>(src);
  double* d = reinterpret_cast<double*>(dst);
  const __m256d coef = _mm256_setr_pd(a, -a, a, -a);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d sv = swap_re_im(_mm256_loadu_pd(s + 2 * j));
    const __m256d dv = _mm256_loadu_pd(d + 2 * j);
    _mm256_storeu_pd(d + 2 * j, _mm256_fmadd_pd(coef, sv, dv));
  }
  for (; j < n; ++j) {
    d[2 * j] += a * s[2 * j + 1];
    d[2 * j + 1] -= a * s[2 * j];
  }
}

void accum_neg_i_profile_avx2(double a, const double* p, const cplx* src, cplx* dst,
                              std::size_t n) {
  const double* s = reinterpret_cast<const double*>(src);
  double* d = reinterpret_cast<double*>(dst);
  const __m256d sign = _mm256_setr_pd(a, -a, a, -a);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d coef = _mm256_mul_pd(sign, dup_pair(p + j));
    const __m256d sv = swap_re_im(_mm256_loadu_pd(s + 2 * j));
    const __m256d dv = _mm256_loadu_pd(d + 2 * j);
    _mm256_storeu_pd(d + 2 * j, _mm256_fmadd_pd(coef, sv, dv));
  }
  for (; j < n; ++j) {
    const double ap = a * p[j];
    d[2 * j] += ap * s[2 * j + 1];
    d[2 * j + 1] -= ap * s[2 * j];
  }
}

template <bool kUp, bool kDown>
void ladder_accum_body(const cplx* r, const cplx* d, const double* vp, double c_up,
                       double c_dn, cplx* up, cplx* down, std::size_t n) {
  const double* rr = reinterpret_cast<const double*>(r);
  const double* dd = reinterpret_cast<const double*>(d);
  double* u = reinterpret_cast<double*>(up);
  double* w = reinterpret_cast<double*>(down);
  const __m256d cu = _mm256_setr_pd(c_up, -c_up, c_up, -c_up);
  const __m256d cd = _mm256_setr_pd(c_dn, -c_dn, c_dn, -c_dn);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d rv = _mm256_loadu_pd(rr + 2 * j);
    const __m256d dv = _mm256_loadu_pd(dd + 2 * j);
    const __m256d hv = _mm256_mul_pd(dup_pair(vp + j), rv);
    if constexpr (kUp) {
      const __m256d tp = swap_re_im(_mm256_add_pd(hv, dv));
      const __m256d uv = _mm256_loadu_pd(u + 2 * j);
      _mm256_storeu_pd(u + 2 * j, _mm256_fmadd_pd(cu, tp, uv));
    }
    if constexpr (kDown) {
      const __m256d tm = swap_re_im(_mm256_sub_pd(hv, dv));
      const __m256d wv = _mm256_loadu_pd(w + 2 * j);
      _mm256_storeu_pd(w + 2 * j, _mm256_fmadd_pd(cd, tm, wv));
    }
  }
  for (; j < n; ++j) {
    const double hr = vp[j] * rr[2 * j];
    const double hi = vp[j] * rr[2 * j + 1];
    if constexpr (kUp) {
      u[2 * j] += c_up * (hi + dd[2 * j + 1]);
      u[2 * j + 1] -= c_up * (hr + dd[2 * j]);
    }
    if constexpr (kDown) {
      w[2 * j] += c_dn * (hi - dd[2 * j + 1]);
      w[2 * j + 1] -= c_dn * (hr - dd[2 * j]);
    }
  }
}

void ladder_accum_avx2(const cplx* r, const cplx* d, const double* vp, double c_up,
                       double c_dn, cplx* up, cplx* down, std::size_t n) {
  if (up && down)
    ladder_accum_body<true, true>(r, d, vp, c_up, c_dn, up, down, n);
  else if (up)
    ladder_accum_body<true, false>(r, d, vp, c_up, c_dn, up, down, n);
  else if (down)
    ladder_accum_body<false, true>(r, d, vp, c_up, c_dn, up, down, n);
}

void stencil_periodic_avx2(const cplx* f, cplx* out, double s1, double s2, std::size_t n) {
  auto wrap = [&](std::ptrdiff_t j) -> const cplx& {
    return f[(j + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n)];
  };
  if (n < 8) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
      out[j] = s1 * (wrap(sj + 1) - wrap(sj - 1)) + s2 * (wrap(sj + 2) - wrap(sj - 2));
    }
    return;
  }
  for (std::size_t j = 0; j < 2; ++j) {
    const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
    out[j] = s1 * (wrap(sj + 1) - wrap(sj - 1)) + s2 * (wrap(sj + 2) - wrap(sj - 2));
  }
  const double* ff = reinterpret_cast<const double*>(f);
  double* oo = reinterpret_cast<double*>(out);
  const __m256d s1v = _mm256_set1_pd(s1);
  const __m256d s2v = _mm256_set1_pd(s2);
  std::size_t j = 2;
  for (; j + 4 <= n - 2; j += 2) {
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(ff + 2 * j + 2), _mm256_loadu_pd(ff + 2 * j - 2));
    const __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(ff + 2 * j + 4), _mm256_loadu_pd(ff + 2 * j - 4));
    _mm256_storeu_pd(oo + 2 * j, _mm256_fmadd_pd(s1v, d1, _mm256_mul_pd(s2v, d2)));
  }
  for (; j < n; ++j) {
    const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
    out[j] = s1 * (wrap(sj + 1) - wrap(sj - 1)) + s2 * (wrap(sj + 2) - wrap(sj - 2));
  }
}

cplx dot_conj_avx2(const cplx* f, const cplx* g, std::size_t n) {
  const double* a = reinterpret_cast<const double*>(f);
  const double* b = reinterpret_cast<const double*>(g);
  __m256d acc_direct = _mm256_setzero_pd(); // pairs (ar*br, ai*bi)
  __m256d acc_cross = _mm256_setzero_pd();  // pairs (ai*br, ar*bi)
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d av = _mm256_loadu_pd(a + 2 * j);
    const __m256d bv = _mm256_loadu_pd(b + 2 * j);
    acc_direct = _mm256_fmadd_pd(av, bv, acc_direct);
    acc_cross = _mm256_fmadd_pd(swap_re_im(av), bv, acc_cross);
  }
  alignas(32) double dbuf[4], cbuf[4];
  _mm256_store_pd(dbuf, acc_direct);
  _mm256_store_pd(cbuf, acc_cross);
  double re = dbuf[0] + dbuf[1] + dbuf[2] + dbuf[3];
  double im = cbuf[0] - cbuf[1] + cbuf[2] - cbuf[3];
  for (; j < n; ++j) {
    re += a[2 * j] * b[2 * j] + a[2 * j + 1] * b[2 * j + 1];
    im += a[2 * j + 1] * b[2 * j] - a[2 * j] * b[2 * j + 1];
  }
  return {re, im};
}

double norm_sq_avx2(const cplx* f, std::size_t n) {
  const double* a = reinterpret_cast<const double*>(f);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= 2 * n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(av, av, acc);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double sum = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < 2 * n; ++i) sum += a[i] * a[i];
  return sum;
}

const Kernels kAvx2 = {
    "avx2",
    axpy_avx2,
    accum_neg_i_avx2,
    accum_neg_i_profile_avx2,
    ladder_accum_avx2,
    stencil_periodic_avx2,
    dot_conj_avx2,
    norm_sq_avx2,
};

} // namespace

const Kernels* avx2_kernels_impl() { return &kAvx2; }

} // namespace weylherm::simd

#else

namespace weylherm::simd {
const Kernels* avx2_kernels_impl() { return nullptr; }
} // namespace weylherm::simd

#endif
