#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace plab {

inline constexpr double pi = 3.14159265358979323846;

/// Uniform cell-centered lattice in polar coordinates (r, phi) about the
/// symmetry center (center_a, 0). Cell centers sit at half steps:
///   r_i = (i + 1/2) dr,  phi_j = -pi + (j + 1/2) dphi,
/// so phi = 0 and phi = pi are cell faces and reflections across lattice
/// planes map centers to centers exactly.
struct PolarGrid {
  double center_a = 0.0;
  double r_max = 1.0;
  int n_r = 0;
  int n_phi = 0;
  double dr = 0.0;
  double dphi = 0.0;

  int cells() const { return n_r * n_phi; }
  int index(int i, int j) const { return i * n_phi + j; }
  double r(int i) const { return (i + 0.5) * dr; }
  double phi(int j) const { return -pi + (j + 0.5) * dphi; }
  int wrap_j(int j) const {
    int m = j % n_phi;
    return m < 0 ? m + n_phi : m;
  }
  /// Cartesian coordinates relative to the symmetry center.
  void cartesian(int i, int j, double& x, double& y) const {
    x = r(i) * std::cos(phi(j));
    y = r(i) * std::sin(phi(j));
  }
  /// Coarsest spacing; used as the "one cell" length scale h.
  double h() const { return std::max(dr, r_max * dphi); }

  bool operator==(const PolarGrid&) const = default;
};

/// Validates and constructs a grid. Rejects odd n_phi (reflection exactness
/// would fail), non-positive r_max, and grids below the 8x8 floor.
PolarGrid build_grid(double center_a, double r_max, int n_r, int n_phi);

struct Cell {
  int i = 0;
  int j = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

}  // namespace plab
