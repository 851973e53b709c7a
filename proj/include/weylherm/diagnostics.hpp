#pragma once

#include <vector>

#include "weylherm/basis.hpp"
#include "weylherm/common.hpp"
#include "weylherm/evolution.hpp"

namespace weylherm {

// sqrt(sum_k ||R_k||^2) with the grid rule
double l2_norm(const HermiteState& state);

// sum_k Phi_k(0) dx sum_j R_k(x_j); the imaginary part vanishes for
// parity-symmetric states and is reported as a health metric.
cplx trace(const HermiteState& state);

// max_k ||R_k - (-1)^k conj(R_k)|| / max(||state||, eps)
double parity_residual(const HermiteState& state);

// L^2 mass fraction carried by the outer 10% of the domain (5% per side);
// values above ~1e-8 mean the periodic wrap is being felt.
double boundary_mass_fraction(const HermiteState& state);

// sum over a+b+alpha+beta <= m of ||x^a dx^b y^alpha dy^beta R||. The y
// ladders act in coefficient space on a copy padded to N + m modes.
// Requires 0 <= m <= 6 and m <= N.
double nm_functional(const HermiteState& state, int m);

struct TailCertificate {
  double tail;  // sqrt(sum_{k>N} |c_k|^2)
  double bound; // (2N+3)^{-p} sqrt(sum_k (2k+1)^{2p} |c_k|^2)
};
TailCertificate projection_tail_certificate(const CoefficientVector& c, int n_keep, int p);

// sqrt(sum_{k<=N} ||a_k - b_k||^2); b must carry at least N+1 modes
double mode_l2_distance(const HermiteState& a, const HermiteState& b, int n_modes);

// max over aligned snapshot times of mode_l2_distance against the first
// N+1 reference modes
double error_vs_reference(const std::vector<HermiteState>& run,
                          const std::vector<HermiteState>& reference, int n_modes);

// ln(e1/e2) / ln(n2/n1), the convergence-table order between two mode counts
double order_of_accuracy(double e1, double n1, double e2, double n2);

// W(x_j, xi_i) = (2 pi)^{-1/2} sum_k (-i)^k R_k(x_j) Phi_k(xi_i); real for
// parity-symmetric states up to round-off.
struct WignerSlice {
  std::vector<double> values; // row-major, nx rows of xi_grid.size() entries
  double imag_residue = 0.0;  // largest |imaginary part| encountered
};
WignerSlice wigner_slice(const HermiteState& state, const std::vector<double>& xi_grid);

} // namespace weylherm
