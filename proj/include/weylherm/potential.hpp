#pragma once

#include <array>
#include <functional>
#include <stdexcept>

namespace weylherm {

// Dimensionless reduced Planck constant of the scaled equations.
struct HbarValue {
  double value = 0.1;

  explicit HbarValue(double h) : value(h) {
    if (!(h > 0.0) || h > 2.0)
      throw std::invalid_argument("HbarValue: hbar must lie in (0, 2]");
  }
};

enum class PotentialKind { harmonic, quartic, callable };

// V(x) with derivatives up to order four, the Weyl difference quotient
// (V(x + hbar y/2) - V(x - hbar y/2)) / hbar, and its Taylor remainder.
// harmonic: V = x^2/2.  quartic: V = x^2/2 + chi x^4/4.
class PotentialModel {
 public:
  static PotentialModel harmonic();
  static PotentialModel quartic(double chi);
  // fns[0] = V, fns[n] = V^(n); missing derivatives may be null and are rejected on use.
  static PotentialModel callable(std::array<std::function<double(double)>, 5> fns);

  PotentialKind kind() const { return kind_; }
  double chi() const { return chi_; }

  double eval(double x) const;
  double deriv(double x, int n) const; // n in 1..4

  // (V(x + hbar y/2) - V(x - hbar y/2)) / hbar; expanded closed form for the
  // polynomial kinds so small hbar does not cancel.
  double weyl_quotient(double hbar, double x, double y) const;

  // weyl_quotient - V'(x) y; identically zero for the harmonic kind,
  // chi hbar^2 x y^3 / 4 for the quartic kind.
  double e_remainder(double hbar, double x, double y) const;

  // sup of |V'''| over [-r, r] (sampled for the callable kind).
  double e_bound_coefficient(double domain_radius) const;

 private:
  PotentialModel() = default;

  PotentialKind kind_ = PotentialKind::harmonic;
  double chi_ = 0.0;
  std::array<std::function<double(double)>, 5> fns_{};
};

} // namespace weylherm
