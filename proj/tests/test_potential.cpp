#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "weylherm/potential.hpp"

using namespace weylherm;

TEST_CASE("closed-form values of the polynomial kinds") {
  auto quartic = PotentialModel::quartic(0.5);
  CHECK(quartic.eval(1.0) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(quartic.deriv(1.0, 1) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(quartic.deriv(2.0, 3) == doctest::Approx(6.0).epsilon(1e-15));

  auto harmonic = PotentialModel::harmonic();
  for (double x : {-3.0, 0.0, 1.7}) CHECK(harmonic.deriv(x, 2) == 1.0);
  CHECK(harmonic.deriv(0.3, 3) == 0.0);
  CHECK(harmonic.deriv(0.3, 4) == 0.0);
}

TEST_CASE("callable kind delegates and rejects missing derivatives") {
  std::array<std::function<double(double)>, 5> fns{};
  fns[0] = [](double x) { return std::cos(x); };
  fns[1] = [](double x) { return -std::sin(x); };
  auto pot = PotentialModel::callable(fns);
  CHECK(pot.eval(0.0) == 1.0);
  CHECK(pot.deriv(0.5, 1) == doctest::Approx(-std::sin(0.5)));
  CHECK_THROWS_AS(pot.deriv(0.5, 2), std::invalid_argument);
}

TEST_CASE("weyl quotient: harmonic collapses to x*y, quartic expansion is exact") {
  auto harmonic = PotentialModel::harmonic();
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int i = 0; i < 30; ++i) {
    const double x = dist(rng), y = dist(rng);
    CHECK(harmonic.weyl_quotient(0.37, x, y) == x * y);
  }

  auto quartic = PotentialModel::quartic(0.5);
  // V'(1)*2 + (0.5*0.01/4)*1*8 = 3.0 + 0.01
  CHECK(quartic.weyl_quotient(0.1, 1.0, 2.0) == doctest::Approx(3.01).epsilon(1e-14));

  // expanded form equals the naive difference quotient away from cancellation
  for (int i = 0; i < 50; ++i) {
    const double x = dist(rng), y = dist(rng);
    for (double hbar : {1e-3, 0.05, 0.7}) {
      const double h = 0.5 * hbar * y;
      const double naive = (quartic.eval(x + h) - quartic.eval(x - h)) / hbar;
      CHECK(quartic.weyl_quotient(hbar, x, y) == doctest::Approx(naive).epsilon(1e-10));
    }
  }
}

TEST_CASE("weyl quotient is odd in y") {
  auto quartic = PotentialModel::quartic(0.25);
  std::array<std::function<double(double)>, 5> fns{};
  fns[0] = [](double x) { return std::cosh(x); };
  auto pot = PotentialModel::callable(fns);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int i = 0; i < 30; ++i) {
    const double x = dist(rng), y = dist(rng);
    CHECK(quartic.weyl_quotient(0.2, x, -y) == doctest::Approx(-quartic.weyl_quotient(0.2, x, y)).epsilon(1e-14));
    CHECK(pot.weyl_quotient(0.2, x, -y) == -pot.weyl_quotient(0.2, x, y)); // exact negation
  }
}

TEST_CASE("remainder: closed forms and hbar^2 scaling") {
  auto harmonic = PotentialModel::harmonic();
  CHECK(harmonic.e_remainder(0.3, 1.2, -2.0) == 0.0);

  auto quartic = PotentialModel::quartic(0.5);
  CHECK(quartic.e_remainder(0.1, 1.0, 2.0) == doctest::Approx(0.01).epsilon(1e-14));

  // cross-check the closed form against finite differences of V
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-2.5, 2.5);
  for (int i = 0; i < 30; ++i) {
    const double x = dist(rng), y = dist(rng);
    const double hbar = 0.1;
    const double h = 0.5 * hbar * y;
    const double naive = (quartic.eval(x + h) - quartic.eval(x - h)) / hbar - quartic.deriv(x, 1) * y;
    CHECK(quartic.e_remainder(hbar, x, y) == doctest::Approx(naive).epsilon(1e-7).scale(1.0));
  }

  // |E| scales like hbar^2 (exact for the quartic closed form)
  const double x = 1.3, y = 1.9;
  const double base = quartic.e_remainder(1e-1, x, y) / (1e-1 * 1e-1);
  for (double hbar : {1e-2, 1e-3}) {
    const double scaled = quartic.e_remainder(hbar, x, y) / (hbar * hbar);
    CHECK(scaled == doctest::Approx(base).epsilon(1e-2));
  }

  // odd in y
  for (int i = 0; i < 20; ++i) {
    const double xx = dist(rng), yy = dist(rng);
    CHECK(quartic.e_remainder(0.2, xx, -yy) == -quartic.e_remainder(0.2, xx, yy));
  }
}

TEST_CASE("remainder obeys the Taylor bound |E| <= hbar^2/24 |y|^3 sup|V'''|") {
  auto quartic = PotentialModel::quartic(0.5);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x = dist(rng), y = dist(rng);
    for (double hbar : {0.5, 0.1, 0.01}) {
      const double bound = hbar * hbar / 24.0 * std::abs(y * y * y) *
                           quartic.e_bound_coefficient(std::abs(x) + std::abs(y));
      CHECK(std::abs(quartic.e_remainder(hbar, x, y)) <= bound * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("e_bound_coefficient closed forms and sampling") {
  CHECK(PotentialModel::harmonic().e_bound_coefficient(10.0) == 0.0);
  CHECK(PotentialModel::quartic(0.5).e_bound_coefficient(4.0) == doctest::Approx(12.0).epsilon(1e-14));

  std::array<std::function<double(double)>, 5> fns{};
  fns[0] = [](double x) { return -std::sin(x); }; // V''' = sin
  fns[3] = [](double x) { return std::sin(x); };
  auto pot = PotentialModel::callable(fns);
  CHECK(pot.e_bound_coefficient(2.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pot.e_bound_coefficient(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-6));
}

TEST_CASE("hbar validation") {
  CHECK_THROWS_AS(HbarValue(0.0), std::invalid_argument);
  CHECK_THROWS_AS(HbarValue(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(HbarValue(2.5), std::invalid_argument);
  CHECK(HbarValue(0.1).value == 0.1);
  CHECK(HbarValue(2.0).value == 2.0);
}
