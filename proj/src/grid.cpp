#include "weylherm/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "weylherm/simd/kernels.hpp"

namespace weylherm {

std::vector<double> GridSpec::nodes() const {
  std::vector<double> xs(n_points);
  for (int j = 0; j < n_points; ++j) xs[j] = node(j);
  return xs;
}

void GridSpec::validate() const {
  if (!(x_max > x_min)) throw std::invalid_argument("GridSpec: x_max must exceed x_min");
  if (n_points < 8) throw std::invalid_argument("GridSpec: n_points must be >= 8");
  if (scheme == DerivScheme::spectral_fourier && !is_power_of_two(static_cast<std::size_t>(n_points)))
    throw std::invalid_argument("GridSpec: spectral_fourier requires a power-of-two n_points");
}

bool grids_compatible(const GridSpec& a, const GridSpec& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.n_points == b.n_points;
}

double deriv_symbol_bound(DerivScheme scheme) {
  switch (scheme) {
    case DerivScheme::central2:
      return 1.0;
    case DerivScheme::central4: {
      // maximize (8 sin t - sin 2t)/6; stationary point has cos t = 1 - sqrt(3/2)
      const double c = 1.0 - std::sqrt(1.5);
      const double s = std::sqrt(1.0 - c * c);
      return s * (8.0 - 2.0 * c) / 6.0;
    }
    case DerivScheme::spectral_fourier:
      return kPi;
  }
  return kPi;
}

void ddx_into(const GridSpec& grid, const FftPlan* plan, const cplx* f, cplx* out) {
  const std::size_t n = static_cast<std::size_t>(grid.n_points);
  const auto& kernels = simd::active_kernels();
  switch (grid.scheme) {
    case DerivScheme::central2:
      kernels.stencil_periodic(f, out, 0.5 / grid.dx(), 0.0, n);
      return;
    case DerivScheme::central4:
      kernels.stencil_periodic(f, out, 8.0 / (12.0 * grid.dx()), -1.0 / (12.0 * grid.dx()), n);
      return;
    case DerivScheme::spectral_fourier: {
      if (plan == nullptr || plan->size() != n)
        throw std::invalid_argument("ddx_into: spectral scheme needs a matching FftPlan");
      for (std::size_t j = 0; j < n; ++j) out[j] = f[j];
      plan->forward(out);
      const double dk = 2.0 * kPi / (grid.x_max - grid.x_min);
      const std::size_t half = n / 2;
      for (std::size_t m = 0; m < n; ++m) {
        // Nyquist mode multiplier is zero: keeps the symbol odd, hence skewness
        double kappa = 0.0;
        if (m < half)
          kappa = dk * static_cast<double>(m);
        else if (m > half)
          kappa = dk * (static_cast<double>(m) - static_cast<double>(n));
        out[m] = cplx(-kappa * out[m].imag(), kappa * out[m].real());
      }
      plan->inverse(out);
      return;
    }
  }
}

FieldLine ddx(const GridSpec& grid, const FieldLine& f) {
  grid.validate();
  if (f.size() != static_cast<std::size_t>(grid.n_points))
    throw std::invalid_argument("ddx: field length does not match the grid");
  FieldLine out(f.size());
  if (grid.scheme == DerivScheme::spectral_fourier) {
    FftPlan plan(f.size());
    ddx_into(grid, &plan, f.data(), out.data());
  } else {
    ddx_into(grid, nullptr, f.data(), out.data());
  }
  return out;
}

namespace {

FieldLine apply_transport(const GridSpec& grid, const PotentialModel& pot, const FieldLine& f,
                          double deriv_sign) {
  FieldLine out = ddx(grid, f);
  for (int j = 0; j < grid.n_points; ++j)
    out[j] = deriv_sign * out[j] + pot.deriv(grid.node(j), 1) * f[j];
  return out;
}

} // namespace

FieldLine apply_D(const GridSpec& grid, const PotentialModel& pot, const FieldLine& f) {
  return apply_transport(grid, pot, f, 1.0);
}

FieldLine apply_Dstar(const GridSpec& grid, const PotentialModel& pot, const FieldLine& f) {
  return apply_transport(grid, pot, f, -1.0);
}

cplx inner_product(const GridSpec& grid, const FieldLine& f, const FieldLine& g) {
  if (f.size() != g.size() || f.size() != static_cast<std::size_t>(grid.n_points))
    throw std::invalid_argument("inner_product: length mismatch");
  const cplx dot = simd::active_kernels().dot_conj(f.data(), g.data(), f.size());
  return grid.dx() * dot;
}

double field_norm(const GridSpec& grid, const FieldLine& f) {
  if (f.size() != static_cast<std::size_t>(grid.n_points))
    throw std::invalid_argument("field_norm: length mismatch");
  return std::sqrt(grid.dx() * simd::active_kernels().norm_sq(f.data(), f.size()));
}

} // namespace weylherm
