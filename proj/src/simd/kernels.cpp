#include "weylherm/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace weylherm::simd {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void accum_neg_i_scalar(double a, const cplx* src, cplx* dst, std::size_t n) {
  const double* s = reinterpret_cast<const double*>(src);
  double* d = reinterpret_cast<double*>(dst);
  for (std::size_t j = 0; j < n; ++j) {
    // (-i a)(re + i im) = a im - i a re
    d[2 * j] += a * s[2 * j + 1];
    d[2 * j + 1] -= a * s[2 * j];
  }
}

void accum_neg_i_profile_scalar(double a, const double* p, const cplx* src, cplx* dst,
                                std::size_t n) {
  const double* s = reinterpret_cast<const double*>(src);
  double* d = reinterpret_cast<double*>(dst);
  for (std::size_t j = 0; j < n; ++j) {
    const double ap = a * p[j];
    d[2 * j] += ap * s[2 * j + 1];
    d[2 * j + 1] -= ap * s[2 * j];
  }
}

void ladder_accum_scalar(const cplx* r, const cplx* d, const double* vp, double c_up,
                         double c_dn, cplx* up, cplx* down, std::size_t n) {
  const double* rr = reinterpret_cast<const double*>(r);
  const double* dd = reinterpret_cast<const double*>(d);
  for (std::size_t j = 0; j < n; ++j) {
    const double hr = vp[j] * rr[2 * j];
    const double hi = vp[j] * rr[2 * j + 1];
    if (up) {
      double* u = reinterpret_cast<double*>(up);
      const double tr = hr + dd[2 * j];
      const double ti = hi + dd[2 * j + 1];
      u[2 * j] += c_up * ti;
      u[2 * j + 1] -= c_up * tr;
    }
    if (down) {
      double* w = reinterpret_cast<double*>(down);
      const double tr = hr - dd[2 * j];
      const double ti = hi - dd[2 * j + 1];
      w[2 * j] += c_dn * ti;
      w[2 * j + 1] -= c_dn * tr;
    }
  }
}

void stencil_periodic_scalar(const cplx* f, cplx* out, double s1, double s2, std::size_t n) {
  auto at = [&](std::ptrdiff_t j) -> const cplx& {
    return f[(j + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n)];
  };
  if (n < 5) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
      out[j] = s1 * (at(sj + 1) - at(sj - 1)) + s2 * (at(sj + 2) - at(sj - 2));
    }
    return;
  }
  for (std::size_t j = 0; j < 2; ++j) {
    const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
    out[j] = s1 * (at(sj + 1) - at(sj - 1)) + s2 * (at(sj + 2) - at(sj - 2));
  }
  for (std::size_t j = 2; j + 2 < n; ++j)
    out[j] = s1 * (f[j + 1] - f[j - 1]) + s2 * (f[j + 2] - f[j - 2]);
  for (std::size_t j = n - 2; j < n; ++j) {
    const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
    out[j] = s1 * (at(sj + 1) - at(sj - 1)) + s2 * (at(sj + 2) - at(sj - 2));
  }
}

cplx dot_conj_scalar(const cplx* f, const cplx* g, std::size_t n) {
  double re = 0.0, im = 0.0;
  const double* a = reinterpret_cast<const double*>(f);
  const double* b = reinterpret_cast<const double*>(g);
  for (std::size_t j = 0; j < n; ++j) {
    re += a[2 * j] * b[2 * j] + a[2 * j + 1] * b[2 * j + 1];
    im += a[2 * j + 1] * b[2 * j] - a[2 * j] * b[2 * j + 1];
  }
  return {re, im};
}

double norm_sq_scalar(const cplx* f, std::size_t n) {
  double acc = 0.0;
  const double* a = reinterpret_cast<const double*>(f);
  for (std::size_t j = 0; j < 2 * n; ++j) acc += a[j] * a[j];
  return acc;
}

const Kernels kScalar = {
    "scalar",
    axpy_scalar,
    accum_neg_i_scalar,
    accum_neg_i_profile_scalar,
    ladder_accum_scalar,
    stencil_periodic_scalar,
    dot_conj_scalar,
    norm_sq_scalar,
};

} // namespace

const Kernels& scalar_kernels() { return kScalar; }

#if defined(__x86_64__) || defined(_M_X64)
const Kernels* avx2_kernels_impl(); // kernels_avx2.cpp

const Kernels* avx2_kernels() { return avx2_kernels_impl(); }

bool cpu_supports_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#else
const Kernels* avx2_kernels() { return nullptr; }
bool cpu_supports_avx2() { return false; }
#endif

const Kernels& active_kernels() {
  static const Kernels& selected = []() -> const Kernels& {
    if (const char* env = std::getenv("WEYLHERM_SIMD"); env && std::string_view(env) == "scalar")
      return scalar_kernels();
    if (const Kernels* avx2 = avx2_kernels(); avx2 && cpu_supports_avx2()) return *avx2;
    return scalar_kernels();
  }();
  return selected;
}

} // namespace weylherm::simd
