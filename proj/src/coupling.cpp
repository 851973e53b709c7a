#include "weylherm/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "weylherm/basis.hpp"
#include "weylherm/simd/kernels.hpp"

namespace weylherm {

namespace {

// Phi_k with the Gaussian stripped: P_k = Phi_k exp(y^2/2), a plain
// polynomial. Products P_k P_l pair with the quadrature weight exp(-y^2) to
// recover Phi_k Phi_l, so assembly never touches an exponential.
void hermite_poly_part(int n_modes, double y, std::vector<double>& out) {
  out.resize(n_modes + 1);
  out[0] = std::pow(kPi, -0.25);
  if (n_modes == 0) return;
  out[1] = std::sqrt(2.0) * y * out[0];
  for (int k = 1; k < n_modes; ++k)
    out[k + 1] = std::sqrt(2.0 / (k + 1)) * y * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
}

} // namespace

CouplingMatrix CouplingMatrix::zero(int n_modes, const GridSpec& grid) {
  CouplingMatrix m;
  m.repr_ = Repr::zero;
  m.n_modes_ = n_modes;
  m.nx_ = grid.n_points;
  return m;
}

CouplingMatrix CouplingMatrix::assemble_quartic(double chi, double hbar, int n_modes,
                                                const GridSpec& grid) {
  if (chi < 0.0) throw std::invalid_argument("assemble_quartic: chi must be >= 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("assemble_quartic: hbar must be > 0");
  if (chi == 0.0) return zero(n_modes, grid);

  CouplingMatrix m;
  m.repr_ = Repr::banded;
  m.n_modes_ = n_modes;
  m.nx_ = grid.n_points;
  m.profile_.resize(grid.n_points);
  const double scale = 0.25 * chi * hbar * hbar;
  for (int j = 0; j < grid.n_points; ++j) m.profile_[j] = scale * grid.node(j);

  m.band1_.resize(std::max(n_modes, 0));
  for (int k = 0; k < n_modes; ++k) m.band1_[k] = y3_bands(k).beta;
  m.band3_.resize(std::max(n_modes - 2, 0));
  for (int k = 0; k + 3 <= n_modes; ++k) m.band3_[k] = y3_bands(k).alpha;
  return m;
}

CouplingMatrix CouplingMatrix::assemble_quadrature(const PotentialModel& pot, double hbar,
                                                   int n_modes, const GridSpec& grid,
                                                   int quad_order) {
  if (!(hbar > 0.0)) throw std::invalid_argument("assemble_quadrature: hbar must be > 0");
  if (n_modes < 0) throw std::invalid_argument("assemble_quadrature: n_modes must be >= 0");
  if (pot.kind() == PotentialKind::harmonic) return zero(n_modes, grid);

  const bool polynomial = pot.kind() != PotentialKind::callable;
  if (polynomial && quad_order > 0 && quad_order < n_modes + 3)
    throw std::invalid_argument(
        "assemble_quadrature: quad_order too small for exact quartic assembly (need N + 3)");

  const int n1 = n_modes + 1;
  auto assemble_with = [&](int q, CouplingMatrix& m) {
    const QuadratureRule rule = gauss_hermite_rule(q);
    m.repr_ = Repr::dense;
    m.n_modes_ = n_modes;
    m.nx_ = grid.n_points;
    m.dense_.assign(static_cast<std::size_t>(grid.n_points) * n1 * n1, 0.0);
    std::vector<double> poly_lo, poly_hi;

    for (int j = 0; j < grid.n_points; ++j) {
      const double x = grid.node(j);
      double* block = m.dense_.data() + static_cast<std::size_t>(j) * n1 * n1;
      // mirrored node pairs are accumulated together: odd integrands cancel
      // exactly, so k+l even entries vanish before they are forced to zero
      for (int i = 0, mirror = q - 1; i <= mirror; ++i, --mirror) {
        const double y = rule.nodes[i];
        hermite_poly_part(n_modes, y, poly_lo);
        const double ew = rule.weights[i] * pot.e_remainder(hbar, x, y);
        if (i == mirror) {
          for (int k = 0; k < n1; ++k)
            for (int l = k; l < n1; ++l) block[k * n1 + l] += ew * poly_lo[k] * poly_lo[l];
        } else {
          hermite_poly_part(n_modes, rule.nodes[mirror], poly_hi);
          const double ew_hi = rule.weights[mirror] * pot.e_remainder(hbar, x, rule.nodes[mirror]);
          for (int k = 0; k < n1; ++k)
            for (int l = k; l < n1; ++l)
              block[k * n1 + l] += ew * poly_lo[k] * poly_lo[l] + ew_hi * poly_hi[k] * poly_hi[l];
        }
      }
    }
  };

  CouplingMatrix m;
  if (polynomial) {
    assemble_with(quad_order > 0 ? quad_order : n_modes + 4, m);
  } else {
    int q = quad_order > 0 ? quad_order : n_modes + 8;
    assemble_with(q, m);
    double residual = 0.0;
    bool converged = false;
    for (int round = 0; round < 6; ++round) {
      CouplingMatrix refined;
      assemble_with(2 * q, refined);
      residual = 0.0;
      for (std::size_t i = 0; i < m.dense_.size(); ++i)
        residual = std::max(residual, std::abs(refined.dense_[i] - m.dense_[i]));
      m.dense_ = std::move(refined.dense_);
      q *= 2;
      if (residual < 1e-12) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("assemble_quadrature: adaptive quadrature stalled, residual " +
                               std::to_string(residual));
  }

  // parity zeros are exact; record what the quadrature produced, then force
  double defect = 0.0;
  for (int j = 0; j < m.nx_; ++j) {
    double* block = m.dense_.data() + static_cast<std::size_t>(j) * n1 * n1;
    for (int k = 0; k < n1; ++k)
      for (int l = k; l < n1; ++l) {
        if ((k + l) % 2 == 0) {
          defect = std::max(defect, std::abs(block[k * n1 + l]));
          block[k * n1 + l] = 0.0;
        }
        block[l * n1 + k] = block[k * n1 + l]; // symmetric by construction
      }
  }
  m.parity_defect_ = defect;
  return m;
}

CouplingMatrix CouplingMatrix::assemble(const PotentialModel& pot, double hbar, int n_modes,
                                        const GridSpec& grid) {
  switch (pot.kind()) {
    case PotentialKind::harmonic: return zero(n_modes, grid);
    case PotentialKind::quartic: return assemble_quartic(pot.chi(), hbar, n_modes, grid);
    case PotentialKind::callable: return assemble_quadrature(pot, hbar, n_modes, grid);
  }
  return zero(n_modes, grid);
}

double CouplingMatrix::entry(int node, int k, int l) const {
  if (node < 0 || node >= nx_ || k < 0 || k > n_modes_ || l < 0 || l > n_modes_)
    throw std::out_of_range("CouplingMatrix::entry: index out of range");
  switch (repr_) {
    case Repr::zero:
      return 0.0;
    case Repr::banded: {
      const int lo = std::min(k, l);
      const int diff = std::abs(k - l);
      if (diff == 1) return profile_[node] * band1_[lo];
      if (diff == 3) return profile_[node] * band3_[lo];
      return 0.0;
    }
    case Repr::dense: {
      const int n1 = n_modes_ + 1;
      return dense_[static_cast<std::size_t>(node) * n1 * n1 + k * n1 + l];
    }
  }
  return 0.0;
}

void CouplingMatrix::apply_node(int node, std::span<const cplx> v, std::span<cplx> out) const {
  const int n1 = n_modes_ + 1;
  if (static_cast<int>(v.size()) != n1 || static_cast<int>(out.size()) != n1)
    throw std::invalid_argument("CouplingMatrix::apply_node: dimension mismatch");
  if (node < 0 || node >= nx_) throw std::out_of_range("CouplingMatrix::apply_node: bad node");

  switch (repr_) {
    case Repr::zero:
      for (auto& o : out) o = 0.0;
      return;
    case Repr::banded: {
      const double c = profile_[node];
      for (int k = 0; k < n1; ++k) {
        cplx acc = 0.0;
        if (k >= 1) acc += band1_[k - 1] * v[k - 1];
        if (k + 1 < n1) acc += band1_[k] * v[k + 1];
        if (k >= 3) acc += band3_[k - 3] * v[k - 3];
        if (k + 3 < n1) acc += band3_[k] * v[k + 3];
        out[k] = c * acc;
      }
      return;
    }
    case Repr::dense: {
      const double* block = dense_.data() + static_cast<std::size_t>(node) * n1 * n1;
      for (int k = 0; k < n1; ++k) {
        cplx acc = 0.0;
        for (int l = 0; l < n1; ++l) acc += block[k * n1 + l] * v[l];
        out[k] = acc;
      }
      return;
    }
  }
}

void CouplingMatrix::accumulate_neg_i(std::span<const cplx> u, std::span<cplx> du) const {
  const int n1 = n_modes_ + 1;
  const std::size_t nx = static_cast<std::size_t>(nx_);
  if (u.size() != nx * n1 || du.size() != nx * n1)
    throw std::invalid_argument("CouplingMatrix::accumulate_neg_i: field size mismatch");

  switch (repr_) {
    case Repr::zero:
      return;
    case Repr::banded: {
      const auto& kernels = simd::active_kernels();
      // four band passes: +-1 and +-3 neighbours scaled by the x profile
      for (int k = 0; k < n1; ++k) {
        cplx* dk = du.data() + static_cast<std::size_t>(k) * nx;
        if (k >= 1)
          kernels.accum_neg_i_profile(band1_[k - 1], profile_.data(),
                                      u.data() + static_cast<std::size_t>(k - 1) * nx, dk, nx);
        if (k + 1 < n1)
          kernels.accum_neg_i_profile(band1_[k], profile_.data(),
                                      u.data() + static_cast<std::size_t>(k + 1) * nx, dk, nx);
        if (k >= 3)
          kernels.accum_neg_i_profile(band3_[k - 3], profile_.data(),
                                      u.data() + static_cast<std::size_t>(k - 3) * nx, dk, nx);
        if (k + 3 < n1)
          kernels.accum_neg_i_profile(band3_[k], profile_.data(),
                                      u.data() + static_cast<std::size_t>(k + 3) * nx, dk, nx);
      }
      return;
    }
    case Repr::dense: {
      for (std::size_t j = 0; j < nx; ++j) {
        const double* block = dense_.data() + j * n1 * n1;
        for (int k = 0; k < n1; ++k) {
          cplx acc = 0.0;
          const double* row = block + k * n1;
          for (int l = 0; l < n1; ++l) acc += row[l] * u[static_cast<std::size_t>(l) * nx + j];
          // du_k += -i acc
          du[static_cast<std::size_t>(k) * nx + j] += cplx(acc.imag(), -acc.real());
        }
      }
      return;
    }
  }
}

double CouplingMatrix::max_row_abs_sum() const {
  switch (repr_) {
    case Repr::zero:
      return 0.0;
    case Repr::banded: {
      double cmax = 0.0;
      for (double c : profile_) cmax = std::max(cmax, std::abs(c));
      double rmax = 0.0;
      const int n1 = n_modes_ + 1;
      for (int k = 0; k < n1; ++k) {
        double row = 0.0;
        if (k >= 1) row += band1_[k - 1];
        if (k + 1 < n1) row += band1_[k];
        if (k >= 3) row += band3_[k - 3];
        if (k + 3 < n1) row += band3_[k];
        rmax = std::max(rmax, row);
      }
      return cmax * rmax;
    }
    case Repr::dense: {
      const int n1 = n_modes_ + 1;
      double rmax = 0.0;
      for (int j = 0; j < nx_; ++j) {
        const double* block = dense_.data() + static_cast<std::size_t>(j) * n1 * n1;
        for (int k = 0; k < n1; ++k) {
          double row = 0.0;
          for (int l = 0; l < n1; ++l) row += std::abs(block[k * n1 + l]);
          rmax = std::max(rmax, row);
        }
      }
      return rmax;
    }
  }
  return 0.0;
}

} // namespace weylherm
