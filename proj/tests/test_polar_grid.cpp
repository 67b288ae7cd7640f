#include <doctest.h>

#include <cmath>

#include "plab/polar_grid.hpp"

using namespace plab;

TEST_CASE("build_grid spacing arithmetic") {
  PolarGrid g = build_grid(0.0, 1.0, 8, 8);
  CHECK(g.dr == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.dphi == doctest::Approx(pi / 4.0).epsilon(1e-15));

  PolarGrid g2 = build_grid(2.5, 3.0, 64, 128);
  CHECK(g2.center_a == 2.5);
  CHECK(g2.dr == doctest::Approx(0.046875).epsilon(1e-15));
}

TEST_CASE("build_grid rejects bad parameters") {
  CHECK_THROWS_WITH_AS(build_grid(0.0, 1.0, 8, 7), doctest::Contains("n_phi must be even"), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, -1.0, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, 0.0, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 8, 6), std::invalid_argument);
}

TEST_CASE("cell centers sit on half steps, never on the axis or origin") {
  PolarGrid g = build_grid(0.0, 2.0, 16, 24);
  for (int i = 0; i < g.n_r; ++i) CHECK(g.r(i) > 0.0);
  for (int j = 0; j < g.n_phi; ++j) {
    CHECK(g.phi(j) != 0.0);
    CHECK(std::abs(g.phi(j)) < pi + 1e-15);
    // phi is an odd multiple of dphi/2 away from -pi
    double steps = (g.phi(j) + pi) / (g.dphi / 2.0);
    CHECK(std::abs(std::remainder(steps, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
