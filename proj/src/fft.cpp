#include "weylherm/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace weylherm {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("FftPlan: length must be a power of two");

  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }

  // stage tables: for len = 2, 4, ..., n store w^j, j < len/2 (n-1 entries total)
  fwd_.reserve(n > 1 ? n - 1 : 0);
  inv_.reserve(n > 1 ? n - 1 : 0);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    for (std::size_t j = 0; j < len / 2; ++j) {
      const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(len);
      fwd_.emplace_back(std::cos(ang), std::sin(ang));
      inv_.emplace_back(std::cos(ang), -std::sin(ang));
    }
  }
}

void FftPlan::transform(cplx* data, const std::vector<cplx>& twiddles) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bitrev_[i];
    if (r > i) std::swap(data[i], data[r]);
  }

  double* d = reinterpret_cast<double*>(data);
  const double* tw = reinterpret_cast<const double*>(twiddles.data());
  std::size_t stage_base = 0;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t block = 0; block < n_; block += len) {
      const double* w = tw + 2 * stage_base;
      double* lo = d + 2 * block;
      double* hi = d + 2 * (block + half);
      for (std::size_t j = 0; j < half; ++j) {
        const double wr = w[2 * j], wi = w[2 * j + 1];
        const double vr = hi[2 * j] * wr - hi[2 * j + 1] * wi;
        const double vi = hi[2 * j] * wi + hi[2 * j + 1] * wr;
        const double ur = lo[2 * j], ui = lo[2 * j + 1];
        lo[2 * j] = ur + vr;
        lo[2 * j + 1] = ui + vi;
        hi[2 * j] = ur - vr;
        hi[2 * j + 1] = ui - vi;
      }
    }
    stage_base += half;
  }
}

void FftPlan::forward(cplx* data) const { transform(data, fwd_); }

void FftPlan::inverse(cplx* data) const {
  transform(data, inv_);
  const double scale = 1.0 / static_cast<double>(n_);
  double* d = reinterpret_cast<double*>(data);
  for (std::size_t i = 0; i < 2 * n_; ++i) d[i] *= scale;
}

} // namespace weylherm
