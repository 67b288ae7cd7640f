#include <doctest.h>

#include <cmath>
#include <limits>

#include "plab/energy.hpp"
#include "plab/lab.hpp"
#include "plab/polarization.hpp"
#include "support/oracles.hpp"

using namespace plab;

TEST_CASE("energy and mass of the zero function vanish") {
  auto mask = oracle::half_disk(12, 16);
  GridFunction z = make_zero_function(mask);
  EnergyConfig ec{2.0, 0.0};
  CHECK(energy(z, ec) == 0.0);
  CHECK(mass(z, ec) == 0.0);
  CHECK_THROWS_AS(rayleigh(z, ec), std::invalid_argument);
}

TEST_CASE("energy rejects functions escaping their mask") {
  auto mask = oracle::half_disk(12, 16);
  GridFunction v = make_zero_function(mask);
  v.at(2, 0) = 1.0;  // phi near -pi: outside the half disk
  CHECK(!mask->is_inside(2, 0));
  CHECK_THROWS_AS(energy(v, EnergyConfig{2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("energy config validation") {
  CHECK_THROWS_AS(validate(EnergyConfig{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(EnergyConfig{1.5, 0.0}), std::invalid_argument);  // p < 2 needs regularization
  CHECK_NOTHROW(validate(EnergyConfig{1.5, 1e-8}));
  CHECK_NOTHROW(validate(EnergyConfig{3.0, 0.0}));
}

TEST_CASE("mass of an equal-weight indicator is the cell count times the weight") {
  auto mask = oracle::half_disk(12, 16);
  const PolarGrid& g = mask->grid();
  GridFunction v = make_zero_function(mask);
  int i0 = 4, k = 0;
  for (int j = 0; j < g.n_phi; ++j)
    if (mask->is_inside(i0, j)) {
      v.at(i0, j) = 1.0;
      ++k;
    }
  REQUIRE(k > 0);
  double w0 = g.r(i0) * g.dr * g.dphi;
  CHECK(mass(v, EnergyConfig{2.0, 0.0}) == k * w0);
  CHECK(mass(v, EnergyConfig{3.0, 0.0}) == k * w0);
}

TEST_CASE("single-cell function matches a hand stencil computation") {
  auto mask = oracle::half_disk(16, 24);
  const PolarGrid& g = mask->grid();
  int i0 = 6, j0 = g.n_phi / 2;  // interior cell with all four neighbors inside
  REQUIRE(mask->is_inside(i0, j0));
  REQUIRE(mask->is_inside(i0 - 1, j0));
  REQUIRE(mask->is_inside(i0 + 1, j0));
  GridFunction v = make_zero_function(mask);
  v.at(i0, j0) = 1.0;

  auto w_of = [&](int i) { return g.r(i) * g.dr * g.dphi; };
  auto a_in = [&](int i) { return i / (2.0 * i + 1.0); };
  auto a_out = [&](int i) { return (i + 1.0) / (2.0 * i + 1.0); };
  double inv_dr2 = 1.0 / (g.dr * g.dr);
  double cphi = [&](int i) { return 1.0 / (2.0 * g.r(i) * g.r(i) * g.dphi * g.dphi); }(i0);

  double center = w_of(i0) * (inv_dr2 * (a_in(i0) + a_out(i0)) + 2.0 * cphi);
  double inner = w_of(i0 - 1) * inv_dr2 * a_out(i0 - 1);
  double outer = w_of(i0 + 1) * inv_dr2 * a_in(i0 + 1);
  double sides = 2.0 * w_of(i0) * cphi;
  double expected = center + inner + outer + sides;

  CHECK(energy(v, EnergyConfig{2.0, 0.0}) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("p-homogeneity of energy and mass") {
  PolarGrid g = build_grid(0.0, 1.0, 12, 24);
  lab::Rng rng(21);
  auto mask = lab::random_symmetric_mask(g, rng);
  GridFunction v = lab::random_function(mask, rng);
  for (double p : {1.5, 2.0, 3.0}) {
    EnergyConfig ec{p, 0.0};
    EnergyConfig ec_reg{p, p < 2.0 ? 1e-9 : 0.0};
    if (p < 2.0) ec = ec_reg;
    for (double c : {2.0, -3.5, 0.25}) {
      GridFunction cv = v;
      for (double& x : cv.values) x *= c;
      double factor = std::pow(std::abs(c), p);
      CHECK(mass(cv, ec) == doctest::Approx(factor * mass(v, ec)).epsilon(1e-12));
      if (p >= 2.0)  // the regularization term is not homogeneous
        CHECK(energy(cv, ec) == doctest::Approx(factor * energy(v, ec)).epsilon(1e-12));
      CHECK(rayleigh(cv, ec) == doctest::Approx(rayleigh(v, ec)).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy is preserved bit-exactly under aligned polarization") {
  PolarGrid g = build_grid(0.0, 1.0, 12, 32);
  lab::Rng rng(22);
  for (int rep = 0; rep < 5; ++rep) {
    auto mask = lab::random_symmetric_mask(g, rng);
    GridFunction v = lab::random_function(mask, rng);
    for (double p : {1.5, 2.0, 3.0}) {
      EnergyConfig ec{p, p < 2.0 ? 1e-8 : 0.0};
      for (int k = 0; k < 2 * g.n_phi; ++k) {
        auto plane = PolarizationPlane::from_index(g, k);
        // anti-polarizing first makes the subsequent polarization act as the
        // full reflection of every pair
        GridFunction aligned = polarize_function(v, plane, PolVariant::PTilde);
        GridFunction swapped = polarize_function(aligned, plane, PolVariant::P);
        double e0 = energy(aligned, ec);
        double e1 = energy(swapped, ec);
        CHECK(std::abs(e1 - e0) <= 10.0 * std::numeric_limits<double>::epsilon() * std::abs(e0));
      }
    }
  }
}

TEST_CASE("p = 2 energy/mass quotient of the dense-oracle eigenvector matches its eigenvalue") {
  PolarGrid g = build_grid(0.0, 1.0, 14, 20);
  auto mask = oracle::random_blob_mask(g, 3, 70);
  auto eig = oracle::dense_p2_eigs(*mask, 2);
  EnergyConfig ec{2.0, 0.0};
  for (int which = 0; which < 2; ++which) {
    GridFunction v = oracle::to_grid_function(mask, eig, which);
    CHECK(rayleigh(v, ec) == doctest::Approx(eig.eigenvalues[which]).epsilon(1e-8));
  }
}

TEST_CASE("rayleigh quotient on the half disk approaches the squared Bessel zero") {
  double j11 = oracle::bessel_zero(1, 3.0, 4.5);
  CHECK(j11 == doctest::Approx(3.83171).epsilon(1e-5));
  auto mask = oracle::half_disk(48, 96);
  const PolarGrid& g = mask->grid();
  GridFunction v = make_zero_function(mask);
  for (const Cell& c : mask->inside().cells())
    v.at(c.i, c.j) = std::cyl_bessel_j(1.0, j11 * g.r(c.i)) * std::cos(g.phi(c.j));
  double q = rayleigh(v, EnergyConfig{2.0, 0.0});
  CHECK(q == doctest::Approx(j11 * j11).epsilon(0.02));
  CHECK(q >= j11 * j11 * (1.0 - 5e-3));  // quotient of a trial function stays near or above the minimum
}

TEST_CASE("weak residual of the dense-oracle eigenpair is tiny and detects an eigenvalue shift") {
  PolarGrid g = build_grid(0.0, 1.0, 14, 20);
  auto mask = oracle::random_blob_mask(g, 9, 80);
  auto eig = oracle::dense_p2_eigs(*mask, 1);
  EnergyConfig ec{2.0, 0.0};
  GridFunction u = oracle::to_grid_function(mask, eig, 0);
  double f = std::pow(mass(u, ec), -0.5);
  for (double& x : u.values) x *= f;
  double lam = eig.eigenvalues[0];
  CHECK(weak_residual(u, lam, ec) < 1e-8);

  // a 10% eigenvalue shift produces a defect of at least half that size
  double scale = 0.0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (mask->is_inside(i, j))
        scale = std::max(scale, std::abs(u.at(i, j)) * g.r(i) * g.dr * g.dphi);
  CHECK(weak_residual(u, 1.1 * lam, ec) >= 0.05 * lam * scale);
}

TEST_CASE("the weak-form operator is the gradient of the energy") {
  PolarGrid g = build_grid(0.0, 1.0, 10, 16);
  lab::Rng rng(23);
  auto mask = lab::random_symmetric_mask(g, rng);
  GridFunction v = lab::random_function(mask, rng);
  EnergyConfig ec{1.8, 1e-3};  // regularized so the functional is smooth
  auto a = p_operator(v, ec);

  for (int dir = 0; dir < 20; ++dir) {
    GridFunction d = lab::random_function(mask, rng);
    double dd = 0.0;
    for (size_t k = 0; k < a.size(); ++k) dd += ec.p * a[k] * d.values[k];
    double h = 1e-6;
    GridFunction vp = v, vm = v;
    for (size_t k = 0; k < v.values.size(); ++k) {
      vp.values[k] += h * d.values[k];
      vm.values[k] -= h * d.values[k];
    }
    double fd = (energy(vp, ec) - energy(vm, ec)) / (2.0 * h);
    CHECK(dd == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("weak rayleigh agrees with the energy quotient when unregularized") {
  PolarGrid g = build_grid(0.0, 1.0, 10, 16);
  lab::Rng rng(24);
  auto mask = lab::random_symmetric_mask(g, rng);
  GridFunction v = lab::random_function(mask, rng);
  for (double p : {2.0, 3.0}) {
    EnergyConfig ec{p, 0.0};
    CHECK(weak_rayleigh(v, ec) == doctest::Approx(rayleigh(v, ec)).epsilon(1e-12));
  }
}
