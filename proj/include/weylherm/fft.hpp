#pragma once

#include <cstddef>
#include <vector>

#include "weylherm/common.hpp"

namespace weylherm {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 complex FFT with precomputed twiddles and bit-reversal,
// sized once and reused across many transforms of the same length.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n); // n must be a power of two

  std::size_t size() const { return n_; }
  void forward(cplx* data) const;  // e^{-i 2 pi j k / n}, unnormalized
  void inverse(cplx* data) const;  // includes the 1/n factor

 private:
  void transform(cplx* data, const std::vector<cplx>& twiddles) const;

  std::size_t n_ = 0;
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> fwd_;  // per-stage twiddle tables, concatenated
  std::vector<cplx> inv_;
};

} // namespace weylherm
