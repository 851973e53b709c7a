#include "weylherm/potential.hpp"

#include <algorithm>
#include <cmath>

namespace weylherm {

PotentialModel PotentialModel::harmonic() {
  PotentialModel p;
  p.kind_ = PotentialKind::harmonic;
  return p;
}

PotentialModel PotentialModel::quartic(double chi) {
  if (chi < 0.0) throw std::invalid_argument("PotentialModel::quartic: chi must be >= 0");
  PotentialModel p;
  p.kind_ = PotentialKind::quartic;
  p.chi_ = chi;
  return p;
}

PotentialModel PotentialModel::callable(std::array<std::function<double(double)>, 5> fns) {
  if (!fns[0]) throw std::invalid_argument("PotentialModel::callable: V itself is required");
  PotentialModel p;
  p.kind_ = PotentialKind::callable;
  p.fns_ = std::move(fns);
  return p;
}

double PotentialModel::eval(double x) const {
  switch (kind_) {
    case PotentialKind::harmonic: return 0.5 * x * x;
    case PotentialKind::quartic: return 0.5 * x * x + 0.25 * chi_ * x * x * x * x;
    case PotentialKind::callable: return fns_[0](x);
  }
  return 0.0;
}

double PotentialModel::deriv(double x, int n) const {
  if (n < 1 || n > 4) throw std::invalid_argument("PotentialModel::deriv: order must be in 1..4");
  switch (kind_) {
    case PotentialKind::harmonic:
      switch (n) {
        case 1: return x;
        case 2: return 1.0;
        default: return 0.0;
      }
    case PotentialKind::quartic:
      switch (n) {
        case 1: return x + chi_ * x * x * x;
        case 2: return 1.0 + 3.0 * chi_ * x * x;
        case 3: return 6.0 * chi_ * x;
        default: return 6.0 * chi_;
      }
    case PotentialKind::callable:
      if (!fns_[n])
        throw std::invalid_argument("PotentialModel::deriv: derivative order not provided for callable potential");
      return fns_[n](x);
  }
  return 0.0;
}

double PotentialModel::weyl_quotient(double hbar, double x, double y) const {
  if (!(hbar > 0.0)) throw std::invalid_argument("PotentialModel::weyl_quotient: hbar must be > 0");
  switch (kind_) {
    case PotentialKind::harmonic:
      return x * y;
    case PotentialKind::quartic:
      // (V(x+h) - V(x-h))/hbar with h = hbar y/2, expanded in closed form
      return (x + chi_ * x * x * x) * y + 0.25 * chi_ * hbar * hbar * x * y * y * y;
    case PotentialKind::callable: {
      const double h = 0.5 * hbar * y;
      return (fns_[0](x + h) - fns_[0](x - h)) / hbar;
    }
  }
  return 0.0;
}

double PotentialModel::e_remainder(double hbar, double x, double y) const {
  if (!(hbar > 0.0)) throw std::invalid_argument("PotentialModel::e_remainder: hbar must be > 0");
  switch (kind_) {
    case PotentialKind::harmonic:
      return 0.0;
    case PotentialKind::quartic:
      return 0.25 * chi_ * hbar * hbar * x * y * y * y;
    case PotentialKind::callable:
      return weyl_quotient(hbar, x, y) - deriv(x, 1) * y;
  }
  return 0.0;
}

double PotentialModel::e_bound_coefficient(double domain_radius) const {
  if (!(domain_radius > 0.0))
    throw std::invalid_argument("PotentialModel::e_bound_coefficient: radius must be > 0");
  switch (kind_) {
    case PotentialKind::harmonic:
      return 0.0;
    case PotentialKind::quartic:
      return 6.0 * chi_ * domain_radius;
    case PotentialKind::callable: {
      // dense sampling; the callable kinds used here are smooth
      const int n = 10001;
      double sup = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = -domain_radius + 2.0 * domain_radius * i / (n - 1);
        sup = std::max(sup, std::abs(deriv(x, 3)));
      }
      return sup;
    }
  }
  return 0.0;
}

} // namespace weylherm
