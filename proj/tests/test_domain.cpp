#include <doctest.h>

#include <cmath>

#include "plab/domain.hpp"
#include "support/oracles.hpp"

using namespace plab;

namespace {

RadialProfile half_disk_profile() {
  return RadialProfile({{1e-9, pi / 2.0}, {1.0, pi / 2.0}});
}

}  // namespace

TEST_CASE("half-disk mask counts match the inside predicate") {
  PolarGrid g = oracle::half_disk_grid(16, 16);
  DomainMask mask = mask_from_profile(g, half_disk_profile());

  // independent cell-by-cell predicate evaluation
  int count = 0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      bool in = g.r(i) < 1.0 && std::abs(g.phi(j)) < pi / 2.0;
      CHECK(mask.is_inside(i, j) == in);
      count += in;
    }
  CHECK(mask.inside_count() == count);
  // rings below the arc radius are half filled, the outer two are empty
  CHECK(mask.inside_count() == (g.n_r - 2) * g.n_phi / 2);
}

TEST_CASE("profile masks reject degenerate or overflowing supports") {
  PolarGrid g = build_grid(0.0, 1.0, 16, 16);
  CHECK_THROWS_WITH_AS(mask_from_profile(g, RadialProfile({{0.5, 0.0}})), doctest::Contains("empty domain"),
                       std::invalid_argument);
  // support reaching the outermost ring is rejected rather than clipped
  CHECK_THROWS_WITH_AS(mask_from_profile(g, half_disk_profile()), doctest::Contains("outermost"),
                       std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile({{0.5, pi}}), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile({{-0.5, 1.0}}), std::invalid_argument);
}

TEST_CASE("mask predicate oracle on a graded profile at 64x128") {
  PolarGrid g = build_grid(0.0, 1.1, 64, 128);
  // beta(r) = 0.9 pi min(1, r), truncated before the outer ring
  RadialProfile prof({{1e-9, 0.0}, {1.0, 0.9 * pi}, {1.04, 0.9 * pi}});
  DomainMask mask = mask_from_profile(g, prof);
  auto beta = [&](double r) {
    if (r <= 1e-9) return 0.0;
    if (r <= 1.0) return 0.9 * pi * (r - 1e-9) / (1.0 - 1e-9);
    if (r <= 1.04) return 0.9 * pi;
    return 0.0;
  };
  int count = 0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      bool in = std::abs(g.phi(j)) < beta(g.r(i));
      CHECK(mask.is_inside(i, j) == in);
      count += in;
    }
  CHECK(mask.inside_count() == count);
}

TEST_CASE("profile masks are symmetric under the angular flip") {
  PolarGrid g = build_grid(0.0, 1.2, 24, 32);
  RadialProfile prof({{1e-9, 1.2}, {0.6, 2.0}, {1.05, 0.7}});
  DomainMask mask = mask_from_profile(g, prof);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      int j_flip = g.wrap_j(-1 - j);  // phi -> -phi
      CHECK(mask.is_inside(i, j) == mask.is_inside(i, j_flip));
    }
}

TEST_CASE("mask construction is deterministic") {
  PolarGrid g = build_grid(0.0, 1.2, 24, 32);
  RadialProfile prof({{1e-9, 1.2}, {0.6, 2.0}, {1.05, 0.7}});
  DomainMask a = mask_from_profile(g, prof);
  DomainMask b = mask_from_profile(g, prof);
  CHECK(a.inside() == b.inside());
}

TEST_CASE("disconnected profiles name the second component") {
  PolarGrid g = build_grid(0.0, 1.0, 16, 16);
  CellSet inside(g);
  inside.insert(2, 3);
  inside.insert(2, 4);
  inside.insert(9, 10);
  CHECK_THROWS_WITH_AS(DomainMask(g, inside), doctest::Contains("(9, 10)"), std::invalid_argument);
}

TEST_CASE("masks touching the grid edge are invalid") {
  PolarGrid g = build_grid(0.0, 1.0, 8, 8);
  CellSet inside(g);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) inside.insert(i, j);
  CHECK_THROWS_WITH_AS(DomainMask(g, inside), doctest::Contains("outermost"), std::invalid_argument);
}

TEST_CASE("boundary cells of the half disk hug the arc and the rays") {
  auto mask = oracle::half_disk(16, 16);
  const PolarGrid& g = mask->grid();
  BoundarySet b = boundary_of(*mask);
  CHECK(!b.cells.empty());
  for (const Cell& c : b.cells.cells()) {
    CHECK(!mask->is_inside(c.i, c.j));
    bool near_arc = g.r(c.i) > 1.0 - g.dr && std::abs(g.phi(c.j)) < pi / 2.0;
    bool near_ray = std::abs(std::abs(g.phi(c.j)) - pi / 2.0) < g.dphi;
    CHECK((near_arc || near_ray));
  }
}

TEST_CASE("boundary cells match a brute-force neighbor scan on random masks") {
  PolarGrid g = build_grid(0.0, 1.0, 20, 28);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto mask = oracle::random_blob_mask(g, seed, 90);
    BoundarySet b = boundary_of(*mask);
    Cell nb[4];
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j) {
        bool expect = false;
        if (!mask->is_inside(i, j)) {
          int n = cell_neighbors(g, {i, j}, nb);
          for (int k = 0; k < n; ++k) expect = expect || mask->is_inside(nb[k]);
        }
        CHECK(b.cells.contains(i, j) == expect);
      }
    // every inside cell with an outside neighbor has that neighbor listed
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j) {
        if (!mask->is_inside(i, j)) continue;
        int n = cell_neighbors(g, {i, j}, nb);
        for (int k = 0; k < n; ++k)
          if (!mask->is_inside(nb[k])) CHECK(b.cells.contains(nb[k]));
      }
  }
}

TEST_CASE("cell_distance identities and the diametric pair") {
  auto mask = oracle::half_disk(16, 16);
  const PolarGrid& g = mask->grid();

  CellSet a(g);
  a.insert(3, 5);
  a.insert(7, 9);
  CHECK(cell_distance(*mask, a, a) == 0.0);

  // diametrically opposite centers at the same radius are exactly 2r apart
  int i_mid = 4;
  int j_lo = 2;
  int j_hi = g.wrap_j(j_lo + g.n_phi / 2);
  CellSet lhs(g), rhs(g);
  lhs.insert(i_mid, j_lo);
  rhs.insert(i_mid, j_hi);
  CHECK(cell_distance(*mask, lhs, rhs) == doctest::Approx(2.0 * g.r(i_mid)).epsilon(1e-12));

  CellSet empty(g);
  CHECK_THROWS_AS(cell_distance(*mask, lhs, empty), std::invalid_argument);
}

TEST_CASE("cell_distance matches the exhaustive pairwise oracle") {
  PolarGrid g = build_grid(0.0, 1.0, 16, 20);
  auto mask = oracle::random_blob_mask(g, 7, 60);
  uint64_t state = 42;
  auto next = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  for (int rep = 0; rep < 10; ++rep) {
    CellSet a(g), b(g);
    for (int k = 0; k < 6; ++k) {
      a.insert(static_cast<int>(next() % g.n_r), static_cast<int>(next() % g.n_phi));
      b.insert(static_cast<int>(next() % g.n_r), static_cast<int>(next() % g.n_phi));
    }
    double got = cell_distance(*mask, a, b);
    double want = oracle::brute_force_distance(g, a.cells(), b.cells());
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
    CHECK(got == doctest::Approx(cell_distance(*mask, b, a)).epsilon(1e-15));
  }
}

TEST_CASE("half-disk area estimate refines toward pi/2 at first order") {
  // r_max deliberately off the face lattice so the staircase error is visible
  double errors[3];
  int sizes[3][2] = {{16, 32}, {32, 64}, {64, 128}};
  for (int k = 0; k < 3; ++k) {
    PolarGrid g = build_grid(0.0, 1.17, sizes[k][0], sizes[k][1]);
    DomainMask mask = mask_from_profile(g, half_disk_profile());
    double area = 0.0;
    for (const Cell& c : mask.inside().cells()) area += g.r(c.i) * g.dr * g.dphi;
    errors[k] = std::abs(area - pi / 2.0);
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
  // O(h) envelope on the coarsest grid
  CHECK(errors[0] < pi * (1.17 / 16.0));
}
