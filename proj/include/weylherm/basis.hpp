#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "weylherm/common.hpp"

namespace weylherm {

// Truncation and quadrature parameters for the Hermite basis
// Phi_k(y) = omega(y) H_k(y) / sqrt(2^k k!), omega(y) = pi^{-1/4} exp(-y^2/2).
struct BasisSpec {
  int n_modes = 0;    // highest retained mode index N (modes 0..N)
  int quad_order = 0; // Gauss-Hermite node count Q; 0 picks N + 8

  int effective_quad_order() const { return quad_order > 0 ? quad_order : n_modes + 8; }
  void validate() const; // throws std::invalid_argument
};

// Nodes/weights for the weight function exp(-y^2).
// Invariants: sum(w) = sqrt(pi), nodes symmetric about 0, weights positive,
// exact for polynomials of degree <= 2Q-1.
struct QuadratureRule {
  std::vector<double> nodes;   // ascending
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }
  // weights rescaled by exp(+y_i^2), for integrands carrying no Gaussian factor
  std::vector<double> lifted_weights() const;
};

// Symmetric-tridiagonal (Golub-Welsch) construction; throws on q < 1.
QuadratureRule gauss_hermite_rule(int q);

// Phi_0(y)..Phi_N(y) by the normalized three-term recurrence
//   Phi_{k+1} = sqrt(2/(k+1)) y Phi_k - sqrt(k/(k+1)) Phi_{k-1}.
// Never forms H_k or 2^k k!, so no overflow for any practical N.
std::vector<double> phi_all(int n_modes, double y);
void phi_all(int n_modes, double y, std::span<double> out);

// Coefficients c_k of G = sum c_k Phi_k, k = 0..N.
using CoefficientVector = std::vector<cplx>;

// Ladder coefficients of y Phi_k = raise(k) Phi_{k+1} + lower(k) Phi_{k-1}.
inline double ladder_lower(int k) { return std::sqrt(0.5 * k); }
inline double ladder_raise(int k) { return std::sqrt(0.5 * (k + 1)); }

// Bands of y^3 Phi_k = alpha_k Phi_{k+3} + beta_k Phi_{k+1} + gamma_k Phi_{k-1} + tau_k Phi_{k-3}.
struct Y3Bands {
  double alpha, beta, gamma, tau;
};
Y3Bands y3_bands(int k);

// Coefficient-space multiplication by y (tridiagonal, truncated back to 0..N).
CoefficientVector apply_y(const CoefficientVector& c);
// Coefficient-space d/dy (tridiagonal with the sign flip on the raising part).
CoefficientVector apply_dy(const CoefficientVector& c);
// Coefficient-space multiplication by y^3 (bands at +-1, +-3).
CoefficientVector apply_y3(const CoefficientVector& c);
// (y^2 - d^2/dy^2)^p acting in coefficient space: entry k scaled by (2k+1)^p.
CoefficientVector number_op_pow(const CoefficientVector& c, int p);

// Fourier eigenvalue of Phi_k under g^(xi) = (2 pi)^{-1/2} int g(y) e^{-i y xi} dy.
cplx fourier_eigen_multiplier(int k);

struct ProjectionResult {
  CoefficientVector coeffs;
  double refinement_delta = 0.0; // max coefficient change when Q is doubled (0 if unchecked)
  bool converged = true;
};

// c_k = int f(y) Phi_k(y) dy by the lifted rule. If check_tol > 0 the
// integral is re-done at 2Q and converged is cleared when any coefficient
// moved by more than check_tol.
ProjectionResult project_function(const std::function<cplx(double)>& f, int n_modes,
                                  int quad_order, double check_tol = 0.0);

} // namespace weylherm
