#include "weylherm/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "weylherm/simd/kernels.hpp"

namespace weylherm {

double l2_norm(const HermiteState& state) {
  const double sq = simd::active_kernels().norm_sq(state.data.data(), state.data.size());
  return std::sqrt(state.grid.dx() * sq);
}

cplx trace(const HermiteState& state) {
  const std::vector<double> phi0 = phi_all(state.n_modes, 0.0);
  cplx acc = 0.0;
  for (int k = 0; k <= state.n_modes; ++k) {
    if (phi0[k] == 0.0) continue;
    cplx line_sum = 0.0;
    for (const cplx& v : state.mode(k)) line_sum += v;
    acc += phi0[k] * line_sum;
  }
  return state.grid.dx() * acc;
}

double parity_residual(const HermiteState& state) {
  const auto& kernels = simd::active_kernels();
  const double norm = l2_norm(state);
  double worst = 0.0;
  std::vector<cplx> defect(state.nx());
  for (int k = 0; k <= state.n_modes; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    auto mode = state.mode(k);
    for (int j = 0; j < state.nx(); ++j) defect[j] = mode[j] - sign * std::conj(mode[j]);
    worst = std::max(worst,
                     std::sqrt(state.grid.dx() * kernels.norm_sq(defect.data(), defect.size())));
  }
  return worst / std::max(norm, 1e-300);
}

double boundary_mass_fraction(const HermiteState& state) {
  const double length = state.grid.x_max - state.grid.x_min;
  const double lo = state.grid.x_min + 0.05 * length;
  const double hi = state.grid.x_max - 0.05 * length;
  double outer = 0.0, total = 0.0;
  for (int k = 0; k <= state.n_modes; ++k) {
    auto mode = state.mode(k);
    for (int j = 0; j < state.nx(); ++j) {
      const double x = state.grid.node(j);
      const double m = std::norm(mode[j]);
      total += m;
      if (x < lo || x >= hi) outer += m;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

namespace {

// State-level y ladders on a mode-major buffer with n_tot+1 modes:
// multiplication by y, or d/dy when derivative is set.
void ladder_state(const std::vector<cplx>& in, std::vector<cplx>& out, int n_tot, int nx,
                  bool derivative) {
  out.assign(in.size(), cplx(0.0));
  for (int m = 0; m <= n_tot; ++m) {
    cplx* o = out.data() + static_cast<std::size_t>(m) * nx;
    if (m >= 1) {
      const double c = (derivative ? -1.0 : 1.0) * ladder_lower(m);
      const cplx* src = in.data() + static_cast<std::size_t>(m - 1) * nx;
      for (int j = 0; j < nx; ++j) o[j] += c * src[j];
    }
    if (m + 1 <= n_tot) {
      const double c = ladder_raise(m);
      const cplx* src = in.data() + static_cast<std::size_t>(m + 1) * nx;
      for (int j = 0; j < nx; ++j) o[j] += c * src[j];
    }
  }
}

void ddx_state(const GridSpec& grid, const FftPlan* plan, const std::vector<cplx>& in,
               std::vector<cplx>& out, int n_tot) {
  out.resize(in.size());
  for (int m = 0; m <= n_tot; ++m)
    ddx_into(grid, plan, in.data() + static_cast<std::size_t>(m) * grid.n_points,
             out.data() + static_cast<std::size_t>(m) * grid.n_points);
}

} // namespace

double nm_functional(const HermiteState& state, int m) {
  if (m < 0 || m > 6)
    throw std::invalid_argument("nm_functional: m must lie in 0..6");
  if (state.n_modes < m)
    throw std::invalid_argument("nm_functional: mode cutoff must be at least m");

  const int nx = state.nx();
  const int n_tot = state.n_modes + m; // ladder headroom
  const std::size_t padded_size = static_cast<std::size_t>(n_tot + 1) * nx;
  std::vector<cplx> base(padded_size, cplx(0.0));
  std::copy(state.data.begin(), state.data.end(), base.begin());

  std::optional<FftPlan> plan;
  if (state.grid.scheme == DerivScheme::spectral_fourier) plan.emplace(nx);
  const FftPlan* plan_ptr = plan ? &*plan : nullptr;

  const auto& kernels = simd::active_kernels();
  std::vector<cplx> cur, next;
  double total = 0.0;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b)
      for (int alpha = 0; a + b + alpha <= m; ++alpha)
        for (int beta = 0; a + b + alpha + beta <= m; ++beta) {
          cur = base;
          for (int i = 0; i < beta; ++i) {
            ladder_state(cur, next, n_tot, nx, true);
            cur.swap(next);
          }
          for (int i = 0; i < alpha; ++i) {
            ladder_state(cur, next, n_tot, nx, false);
            cur.swap(next);
          }
          for (int i = 0; i < b; ++i) {
            ddx_state(state.grid, plan_ptr, cur, next, n_tot);
            cur.swap(next);
          }
          if (a > 0) {
            for (int k = 0; k <= n_tot; ++k) {
              cplx* line = cur.data() + static_cast<std::size_t>(k) * nx;
              for (int j = 0; j < nx; ++j) {
                double xa = 1.0;
                for (int i = 0; i < a; ++i) xa *= state.grid.node(j);
                line[j] *= xa;
              }
            }
          }
          total += std::sqrt(state.grid.dx() * kernels.norm_sq(cur.data(), cur.size()));
        }
  return total;
}

TailCertificate projection_tail_certificate(const CoefficientVector& c, int n_keep, int p) {
  if (p < 0) throw std::invalid_argument("projection_tail_certificate: p must be >= 0");
  if (static_cast<int>(c.size()) <= n_keep + 1)
    throw std::invalid_argument("projection_tail_certificate: need coefficients beyond mode N");

  double tail_sq = 0.0;
  for (std::size_t k = n_keep + 1; k < c.size(); ++k) tail_sq += std::norm(c[k]);

  // bound computed in ratio form ((2k+1)/(2N+3))^p so the single-mode case
  // saturates the inequality exactly
  const double denom = 2.0 * n_keep + 3.0;
  double bound_sq = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    double ratio_pow = 1.0;
    for (int i = 0; i < p; ++i) ratio_pow *= (2.0 * k + 1.0) / denom;
    bound_sq += ratio_pow * ratio_pow * std::norm(c[k]);
  }

  TailCertificate cert{std::sqrt(tail_sq), std::sqrt(bound_sq)};
  if (!(cert.tail <= cert.bound))
    throw std::logic_error("projection_tail_certificate: tail exceeded its bound");
  return cert;
}

double mode_l2_distance(const HermiteState& a, const HermiteState& b, int n_modes) {
  if (a.n_modes < n_modes || b.n_modes < n_modes)
    throw std::invalid_argument("mode_l2_distance: states carry fewer modes than requested");
  if (!grids_compatible(a.grid, b.grid))
    throw std::invalid_argument("mode_l2_distance: grid mismatch");
  const auto& kernels = simd::active_kernels();
  std::vector<cplx> diff(a.nx());
  double acc = 0.0;
  for (int k = 0; k <= n_modes; ++k) {
    auto am = a.mode(k);
    auto bm = b.mode(k);
    for (int j = 0; j < a.nx(); ++j) diff[j] = am[j] - bm[j];
    acc += kernels.norm_sq(diff.data(), diff.size());
  }
  return std::sqrt(a.grid.dx() * acc);
}

double error_vs_reference(const std::vector<HermiteState>& run,
                          const std::vector<HermiteState>& reference, int n_modes) {
  if (run.size() != reference.size() || run.empty())
    throw std::invalid_argument("error_vs_reference: snapshot counts differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (std::abs(run[i].time - reference[i].time) > 1e-9 * std::max(1.0, std::abs(run[i].time)))
      throw std::invalid_argument("error_vs_reference: snapshot times do not align");
    worst = std::max(worst, mode_l2_distance(run[i], reference[i], n_modes));
  }
  return worst;
}

double order_of_accuracy(double e1, double n1, double e2, double n2) {
  if (!(e1 > 0.0) || !(e2 > 0.0))
    throw std::invalid_argument("order_of_accuracy: errors must be positive");
  if (!(n2 > n1) || !(n1 > 0.0))
    throw std::invalid_argument("order_of_accuracy: need n2 > n1 > 0");
  return std::log(e1 / e2) / std::log(n2 / n1);
}

WignerSlice wigner_slice(const HermiteState& state, const std::vector<double>& xi_grid) {
  WignerSlice slice;
  slice.values.assign(static_cast<std::size_t>(state.nx()) * xi_grid.size(), 0.0);
  const double scale = 1.0 / std::sqrt(2.0 * kPi);
  std::vector<double> phis(state.n_modes + 1);
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    phi_all(state.n_modes, xi_grid[i], phis);
    for (int j = 0; j < state.nx(); ++j) {
      cplx acc = 0.0;
      for (int k = 0; k <= state.n_modes; ++k)
        acc += fourier_eigen_multiplier(k) * state.mode(k)[j] * phis[k];
      acc *= scale;
      slice.values[static_cast<std::size_t>(j) * xi_grid.size() + i] = acc.real();
      slice.imag_residue = std::max(slice.imag_residue, std::abs(acc.imag()));
    }
  }
  return slice;
}

} // namespace weylherm
