#pragma once

#include <span>
#include <vector>

#include "weylherm/common.hpp"
#include "weylherm/grid.hpp"
#include "weylherm/potential.hpp"

namespace weylherm {

// Hermite-basis matrices E_{k,l}(x_j) of the Weyl remainder, applied to the
// mode vector at each grid node. Real, symmetric, zero whenever k+l is even.
//
// Three storage forms:
//   zero    harmonic (the remainder vanishes identically)
//   banded  quartic: scalar profile c(x) = chi hbar^2 x / 4 times the constant
//           y^3 bands at |k-l| in {1,3}
//   dense   per-node (N+1)^2 matrices from quadrature (any potential)
class CouplingMatrix {
 public:
  enum class Repr { zero, banded, dense };

  CouplingMatrix() = default; // empty zero matrix

  static CouplingMatrix zero(int n_modes, const GridSpec& grid);

  // closed-form quartic path
  static CouplingMatrix assemble_quartic(double chi, double hbar, int n_modes,
                                         const GridSpec& grid);

  // quadrature path; quad_order 0 picks N + 4 for polynomial kinds and an
  // adaptive doubling rule (entry change < 1e-12) for callable kinds
  static CouplingMatrix assemble_quadrature(const PotentialModel& pot, double hbar,
                                            int n_modes, const GridSpec& grid,
                                            int quad_order = 0);

  // natural representation per potential kind (zero / banded / dense)
  static CouplingMatrix assemble(const PotentialModel& pot, double hbar, int n_modes,
                                 const GridSpec& grid);

  Repr repr() const { return repr_; }
  int n_modes() const { return n_modes_; }
  int nx() const { return nx_; }

  // largest |E_{k,l}| with k+l even seen before forcing (quadrature health)
  double parity_defect() const { return parity_defect_; }

  double entry(int node, int k, int l) const;

  // out = E(x_node) v  (matrix-vector product at one grid node)
  void apply_node(int node, std::span<const cplx> v, std::span<cplx> out) const;

  // du += -i E u over all nodes; u, du are mode-major (N+1) x nx fields
  void accumulate_neg_i(std::span<const cplx> u, std::span<cplx> du) const;

  // max over (j, k) of sum_l |E_{k,l}(x_j)|, for stability estimates
  double max_row_abs_sum() const;

 private:
  Repr repr_ = Repr::zero;
  int n_modes_ = 0;
  int nx_ = 0;
  double parity_defect_ = 0.0;

  // banded: profile over nodes and the two constant y^3 bands
  std::vector<double> profile_; // c(x_j)
  std::vector<double> band1_;   // (y^3)_{k,k+1}, k = 0..N-1
  std::vector<double> band3_;   // (y^3)_{k,k+3}, k = 0..N-3

  // dense: node-major (N+1)^2 blocks
  std::vector<double> dense_;
};

} // namespace weylherm
