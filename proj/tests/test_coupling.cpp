#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "weylherm/basis.hpp"
#include "weylherm/coupling.hpp"

using namespace weylherm;

namespace {

GridSpec small_grid(int nx = 8) {
  GridSpec g;
  g.x_min = -4.0;
  g.x_max = 4.0;
  g.n_points = nx;
  g.scheme = DerivScheme::central2;
  return g;
}

std::vector<cplx> random_modes(std::mt19937& rng, int n1) {
  std::normal_distribution<double> dist;
  std::vector<cplx> v(n1);
  for (auto& z : v) z = cplx(dist(rng), dist(rng));
  return v;
}

} // namespace

TEST_CASE("harmonic potential has an identically zero coupling") {
  auto grid = small_grid();
  auto pot = PotentialModel::harmonic();
  auto viaq = CouplingMatrix::assemble_quadrature(pot, 0.1, 12, grid);
  CHECK(viaq.repr() == CouplingMatrix::Repr::zero);
  auto nat = CouplingMatrix::assemble(pot, 0.1, 12, grid);
  CHECK(nat.repr() == CouplingMatrix::Repr::zero);
  CHECK(nat.max_row_abs_sum() == 0.0);

  auto chi0 = CouplingMatrix::assemble_quartic(0.0, 0.1, 12, grid);
  CHECK(chi0.repr() == CouplingMatrix::Repr::zero);
}

TEST_CASE("quartic banded entries match the y^3 ladder coefficients") {
  auto grid = small_grid(8); // node 5 sits at x = 1 exactly
  auto banded = CouplingMatrix::assemble_quartic(0.5, 0.1, 16, grid);
  REQUIRE(banded.repr() == CouplingMatrix::Repr::banded);

  CHECK(grid.node(5) == 1.0);
  // E_{0,3}(1) = chi hbar^2/4 * alpha_0 = 0.5 * 0.0025 * sqrt(3)/2
  CHECK(banded.entry(5, 0, 3) == doctest::Approx(1.0825318e-3).epsilon(1e-6));
  CHECK(banded.entry(5, 0, 3) == doctest::Approx(banded.entry(5, 3, 0)).epsilon(1e-15));

  // band (0,3) carries alpha_0 = sqrt(3)/2 scaled by the profile
  const double profile = 0.5 * 0.1 * 0.1 / 4.0 * grid.node(5);
  CHECK(banded.entry(5, 0, 3) == doctest::Approx(profile * std::sqrt(3.0) / 2.0).epsilon(1e-15));

  // zero whenever k + l is even, and on bands beyond +-3
  for (int k = 0; k <= 16; ++k)
    for (int l = 0; l <= 16; ++l) {
      if ((k + l) % 2 == 0) CHECK(banded.entry(3, k, l) == 0.0);
      if (std::abs(k - l) != 1 && std::abs(k - l) != 3) CHECK(banded.entry(3, k, l) == 0.0);
    }
}

TEST_CASE("dual path: quadrature equals the closed-form bands to 1e-13") {
  auto grid = small_grid(16);
  auto pot = PotentialModel::quartic(0.5);
  const int n = 16;
  auto dense = CouplingMatrix::assemble_quadrature(pot, 0.1, n, grid);
  auto banded = CouplingMatrix::assemble_quartic(0.5, 0.1, n, grid);
  REQUIRE(dense.repr() == CouplingMatrix::Repr::dense);

  double worst = 0.0;
  for (int j = 0; j < grid.n_points; ++j)
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l)
        worst = std::max(worst, std::abs(dense.entry(j, k, l) - banded.entry(j, k, l)));
  CHECK(worst <= 1e-13);
}

TEST_CASE("quadrature assembly: exact parity zeros and symmetry") {
  auto grid = small_grid(8);
  auto pot = PotentialModel::quartic(0.5);
  auto dense = CouplingMatrix::assemble_quadrature(pot, 0.1, 10, grid);

  // mirrored-node accumulation makes the even entries exact zeros already
  CHECK(dense.parity_defect() <= 1e-15);
  for (int j = 0; j < grid.n_points; ++j)
    for (int k = 0; k <= 10; ++k)
      for (int l = 0; l <= 10; ++l) {
        if ((k + l) % 2 == 0) CHECK(dense.entry(j, k, l) == 0.0);
        CHECK(dense.entry(j, k, l) == dense.entry(j, l, k));
      }
}

TEST_CASE("quadrature pre-validation rejects an under-resolved rule") {
  auto grid = small_grid(8);
  auto pot = PotentialModel::quartic(0.5);
  CHECK_THROWS_AS(CouplingMatrix::assemble_quadrature(pot, 0.1, 10, grid, 11),
                  std::invalid_argument);
  CHECK_NOTHROW(CouplingMatrix::assemble_quadrature(pot, 0.1, 10, grid, 13));
}

TEST_CASE("callable potential: adaptive assembly agrees with the remainder integral") {
  auto grid = small_grid(8);
  std::array<std::function<double(double)>, 5> fns{};
  fns[0] = [](double x) { return std::cosh(x); };
  fns[1] = [](double x) { return std::sinh(x); };
  auto pot = PotentialModel::callable(fns);
  const int n = 6;
  auto dense = CouplingMatrix::assemble_quadrature(pot, 0.2, n, grid);
  REQUIRE(dense.repr() == CouplingMatrix::Repr::dense);

  // oracle: wide trapezoid of E(x,y) Phi_k Phi_l at one node and mode pair
  const int j = 6; // x = 2
  const double x = grid.node(j);
  auto integrand = [&](double y, int k, int l) {
    auto phis = phi_all(n, y);
    return pot.e_remainder(0.2, x, y) * phis[k] * phis[l];
  };
  for (auto [k, l] : {std::pair{0, 1}, std::pair{2, 3}, std::pair{1, 4}}) {
    const int steps = 20000;
    const double a = -10.0, b = 10.0, h = (b - a) / steps;
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double y = a + i * h;
      const double v = integrand(y, k, l);
      acc += (i == 0 || i == steps) ? 0.5 * v : v;
    }
    acc *= h;
    CHECK(dense.entry(j, k, l) == doctest::Approx(acc).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("apply_node: banded and dense products agree; zero maps to zero") {
  auto grid = small_grid(16);
  auto pot = PotentialModel::quartic(0.5);
  const int n = 12;
  auto dense = CouplingMatrix::assemble_quadrature(pot, 0.1, n, grid);
  auto banded = CouplingMatrix::assemble_quartic(0.5, 0.1, n, grid);
  auto zero = CouplingMatrix::zero(n, grid);

  std::mt19937 rng(31);
  std::vector<cplx> out_d(n + 1), out_b(n + 1), out_z(n + 1);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = random_modes(rng, n + 1);
    const int j = static_cast<int>(rng() % 16);
    dense.apply_node(j, v, out_d);
    banded.apply_node(j, v, out_b);
    zero.apply_node(j, v, out_z);
    for (int k = 0; k <= n; ++k) {
      CHECK(std::abs(out_d[k] - out_b[k]) <= 1e-13);
      CHECK(std::abs(out_z[k]) == 0.0);
    }

    // real symmetric matrix: <Ev, v> is real
    cplx quad = 0.0;
    for (int k = 0; k <= n; ++k) quad += out_b[k] * std::conj(v[k]);
    CHECK(std::abs(quad.imag()) <= 1e-13 * std::abs(quad.real() + 1e-30));
  }

  std::vector<cplx> bad(n);
  CHECK_THROWS_AS(dense.apply_node(0, bad, out_d), std::invalid_argument);
}

TEST_CASE("accumulate_neg_i over fields matches per-node products") {
  auto grid = small_grid(16);
  const int n = 9;
  auto banded = CouplingMatrix::assemble_quartic(0.5, 0.1, n, grid);
  auto dense = CouplingMatrix::assemble_quadrature(PotentialModel::quartic(0.5), 0.1, n, grid);

  std::mt19937 rng(77);
  const std::size_t total = static_cast<std::size_t>(n + 1) * grid.n_points;
  std::vector<cplx> u = random_modes(rng, static_cast<int>(total));

  for (const CouplingMatrix* m : {&banded, &dense}) {
    std::vector<cplx> du(total, cplx(0.0));
    m->accumulate_neg_i(u, du);

    std::vector<cplx> v(n + 1), ev(n + 1);
    for (int j = 0; j < grid.n_points; ++j) {
      for (int l = 0; l <= n; ++l) v[l] = u[static_cast<std::size_t>(l) * grid.n_points + j];
      m->apply_node(j, v, ev);
      for (int k = 0; k <= n; ++k) {
        const cplx expect = cplx(0.0, -1.0) * ev[k];
        CHECK(std::abs(du[static_cast<std::size_t>(k) * grid.n_points + j] - expect) <= 1e-13);
      }
    }
  }
}

TEST_CASE("parity-symmetric states see no energy from the coupling") {
  // mechanism of the L^2 conservation proof: for R_k = (-1)^k conj(R_k),
  // Re( i sum_{k,l} <E_{k,l} R_l, R_k> ) = 0
  auto grid = small_grid(32);
  const int n = 11;
  auto coupling = CouplingMatrix::assemble_quartic(0.5, 0.1, n, grid);

  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  std::vector<std::vector<cplx>> modes(n + 1, std::vector<cplx>(grid.n_points));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j < grid.n_points; ++j)
      modes[k][j] = k % 2 == 0 ? cplx(dist(rng), 0.0) : cplx(0.0, dist(rng));

  std::vector<cplx> v(n + 1), ev(n + 1);
  cplx total = 0.0;
  double scale = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    for (int l = 0; l <= n; ++l) v[l] = modes[l][j];
    coupling.apply_node(j, v, ev);
    for (int k = 0; k <= n; ++k) {
      total += grid.dx() * ev[k] * std::conj(v[k]);
      scale += grid.dx() * std::norm(v[k]);
    }
  }
  CHECK(std::abs((cplx(0.0, 1.0) * total).real()) <= 1e-12 * scale);
}
