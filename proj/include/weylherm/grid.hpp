#pragma once

#include <vector>

#include "weylherm/common.hpp"
#include "weylherm/fft.hpp"
#include "weylherm/potential.hpp"

namespace weylherm {

enum class DerivScheme { central4, central2, spectral_fourier };

// Uniform periodic grid on [x_min, x_max); node j sits at x_min + j dx.
struct GridSpec {
  double x_min = -4.0;
  double x_max = 4.0;
  int n_points = 512;
  DerivScheme scheme = DerivScheme::central4;

  double dx() const { return (x_max - x_min) / n_points; }
  double node(int j) const { return x_min + j * dx(); }
  std::vector<double> nodes() const;
  void validate() const; // throws std::invalid_argument

  bool operator==(const GridSpec&) const = default;
};

// Same extents and resolution; the derivative scheme may differ.
bool grids_compatible(const GridSpec& a, const GridSpec& b);

using FieldLine = std::vector<cplx>;

// Skew-adjoint discrete d/dx: antisymmetric central stencils with periodic
// wrap, or exact Fourier differentiation (Nyquist multiplier zeroed to keep
// the symbol odd).
FieldLine ddx(const GridSpec& grid, const FieldLine& f);

// d/dx into a caller buffer (out must not alias f); `plan` is required for
// spectral_fourier.
void ddx_into(const GridSpec& grid, const FftPlan* plan, const cplx* f, cplx* out);

// D f = f' + V' f and its discrete adjoint D* f = -f' + V' f.
FieldLine apply_D(const GridSpec& grid, const PotentialModel& pot, const FieldLine& f);
FieldLine apply_Dstar(const GridSpec& grid, const PotentialModel& pot, const FieldLine& f);

// <f, g> = dx sum_j f_j conj(g_j)  (rectangle rule under periodicity)
cplx inner_product(const GridSpec& grid, const FieldLine& f, const FieldLine& g);
double field_norm(const GridSpec& grid, const FieldLine& f);

// Largest |symbol| of the derivative stencil in units of 1/dx; pi for the
// Fourier scheme.
double deriv_symbol_bound(DerivScheme scheme);

} // namespace weylherm
