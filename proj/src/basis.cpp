#include "weylherm/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace weylherm {

namespace {

const double kOmega0 = std::pow(kPi, -0.25); // Phi_0(0)

// Implicit-shift QL sweep for a symmetric tridiagonal matrix, tracking only
// the first row of the accumulated eigenvector matrix (all Golub-Welsch
// needs: weight_i = sqrt(pi) * z_i^2).
void tridiag_eigen_first_row(std::vector<double>& diag, std::vector<double>& sub,
                             std::vector<double>& z) {
  const int n = static_cast<int>(diag.size());
  if (n == 1) return;
  sub.push_back(0.0); // sentinel e[n-1]

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(sub[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m == l) break;
      if (++iter > 64) throw std::runtime_error("gauss_hermite_rule: QL iteration failed to converge");

      double g = (diag[l + 1] - diag[l]) / (2.0 * sub[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + sub[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * sub[i];
        const double b = c * sub[i];
        r = std::hypot(f, g);
        sub[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          sub[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        // rotate the tracked first row
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      sub[l] = g;
      sub[m] = 0.0;
    }
  }
  sub.pop_back();
}

} // namespace

void BasisSpec::validate() const {
  if (n_modes < 0) throw std::invalid_argument("BasisSpec: n_modes must be >= 0");
  if (quad_order < 0) throw std::invalid_argument("BasisSpec: quad_order must be >= 1 (or 0 for default)");
  const int q = effective_quad_order();
  if (q < n_modes + 1)
    throw std::invalid_argument("BasisSpec: quad_order must be at least n_modes + 1 for orthonormality");
}

std::vector<double> QuadratureRule::lifted_weights() const {
  std::vector<double> lifted(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    lifted[i] = std::exp(std::log(weights[i]) + nodes[i] * nodes[i]);
  return lifted;
}

QuadratureRule gauss_hermite_rule(int q) {
  if (q < 1) throw std::invalid_argument("gauss_hermite_rule: node count must be >= 1");

  // Jacobi matrix of the exp(-y^2) weight: zero diagonal, off-diagonal sqrt(k/2).
  std::vector<double> diag(q, 0.0), sub(q > 1 ? q - 1 : 0);
  for (int k = 1; k < q; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  std::vector<double> z(q, 0.0);
  z[0] = 1.0;

  tridiag_eigen_first_row(diag, sub, z);

  std::vector<int> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) { return diag[a] < diag[b]; });

  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    rule.nodes[i] = diag[perm[i]];
    rule.weights[i] = kSqrtPi * z[perm[i]] * z[perm[i]];
  }

  // Enforce the exact symmetry of the rule; the center node of an odd rule is 0.
  for (int i = 0, m = q - 1; i < m; ++i, --m) {
    const double y = 0.5 * (rule.nodes[m] - rule.nodes[i]);
    rule.nodes[i] = -y;
    rule.nodes[m] = y;
    const double w = 0.5 * (rule.weights[i] + rule.weights[m]);
    rule.weights[i] = w;
    rule.weights[m] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

void phi_all(int n_modes, double y, std::span<double> out) {
  if (n_modes < 0) throw std::invalid_argument("phi_all: n_modes must be >= 0");
  if (!std::isfinite(y)) throw std::invalid_argument("phi_all: y must be finite");
  if (out.size() != static_cast<std::size_t>(n_modes) + 1)
    throw std::invalid_argument("phi_all: output span has wrong length");

  out[0] = kOmega0 * std::exp(-0.5 * y * y);
  if (n_modes == 0) return;
  out[1] = std::sqrt(2.0) * y * out[0];
  for (int k = 1; k < n_modes; ++k)
    out[k + 1] = std::sqrt(2.0 / (k + 1)) * y * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
}

std::vector<double> phi_all(int n_modes, double y) {
  std::vector<double> out(n_modes + 1);
  phi_all(n_modes, y, out);
  return out;
}

Y3Bands y3_bands(int k) {
  Y3Bands b;
  b.alpha = std::sqrt((k + 1.0) * (k + 2.0) * (k + 3.0) / 8.0);
  b.beta = 1.5 * (k + 1.0) * std::sqrt(0.5 * (k + 1.0));
  b.gamma = 1.5 * k * std::sqrt(0.5 * k);
  b.tau = k >= 3 ? std::sqrt(k * (k - 1.0) * (k - 2.0) / 8.0) : 0.0;
  return b;
}

CoefficientVector apply_y(const CoefficientVector& c) {
  const int n = static_cast<int>(c.size());
  CoefficientVector out(n, cplx(0.0));
  for (int m = 0; m < n; ++m) {
    if (m >= 1) out[m] += ladder_lower(m) * c[m - 1];
    if (m + 1 < n) out[m] += ladder_raise(m) * c[m + 1];
  }
  return out;
}

CoefficientVector apply_dy(const CoefficientVector& c) {
  const int n = static_cast<int>(c.size());
  CoefficientVector out(n, cplx(0.0));
  for (int m = 0; m < n; ++m) {
    if (m >= 1) out[m] -= ladder_lower(m) * c[m - 1];
    if (m + 1 < n) out[m] += ladder_raise(m) * c[m + 1];
  }
  return out;
}

CoefficientVector apply_y3(const CoefficientVector& c) {
  const int n = static_cast<int>(c.size());
  CoefficientVector out(n, cplx(0.0));
  for (int m = 0; m < n; ++m) {
    if (m >= 3) out[m] += y3_bands(m - 3).alpha * c[m - 3];
    if (m >= 1) out[m] += y3_bands(m - 1).beta * c[m - 1];
    if (m + 1 < n) out[m] += y3_bands(m + 1).gamma * c[m + 1];
    if (m + 3 < n) out[m] += y3_bands(m + 3).tau * c[m + 3];
  }
  return out;
}

CoefficientVector number_op_pow(const CoefficientVector& c, int p) {
  if (p < 0) throw std::invalid_argument("number_op_pow: p must be >= 0");
  CoefficientVector out(c);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double factor = 1.0;
    for (int j = 0; j < p; ++j) factor *= 2.0 * k + 1.0;
    out[k] *= factor;
  }
  return out;
}

cplx fourier_eigen_multiplier(int k) {
  if (k < 0) throw std::invalid_argument("fourier_eigen_multiplier: k must be >= 0");
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

namespace {

CoefficientVector project_once(const std::function<cplx(double)>& f, int n_modes, int q) {
  const QuadratureRule rule = gauss_hermite_rule(q);
  const std::vector<double> lifted = rule.lifted_weights();
  CoefficientVector coeffs(n_modes + 1, cplx(0.0));
  std::vector<double> phis(n_modes + 1);
  for (int i = 0; i < q; ++i) {
    phi_all(n_modes, rule.nodes[i], phis);
    const cplx fw = lifted[i] * f(rule.nodes[i]);
    for (int k = 0; k <= n_modes; ++k) coeffs[k] += fw * phis[k];
  }
  return coeffs;
}

} // namespace

ProjectionResult project_function(const std::function<cplx(double)>& f, int n_modes,
                                  int quad_order, double check_tol) {
  if (n_modes < 0) throw std::invalid_argument("project_function: n_modes must be >= 0");
  if (quad_order < 1) throw std::invalid_argument("project_function: quad_order must be >= 1");

  ProjectionResult result;
  result.coeffs = project_once(f, n_modes, quad_order);
  if (check_tol > 0.0) {
    const CoefficientVector refined = project_once(f, n_modes, 2 * quad_order);
    for (int k = 0; k <= n_modes; ++k)
      result.refinement_delta = std::max(result.refinement_delta, std::abs(refined[k] - result.coeffs[k]));
    result.converged = result.refinement_delta <= check_tol;
  }
  return result;
}

} // namespace weylherm
