#include "plab/polar_grid.hpp"

#include <string>

namespace plab {

PolarGrid build_grid(double center_a, double r_max, int n_r, int n_phi) {
  if (!(r_max > 0.0)) throw std::invalid_argument("build_grid: r_max must be positive");
  if (n_phi % 2 != 0) throw std::invalid_argument("build_grid: n_phi must be even");
  if (n_r < 8) throw std::invalid_argument("build_grid: n_r must be at least 8");
  if (n_phi < 8) throw std::invalid_argument("build_grid: n_phi must be at least 8");
  PolarGrid g;
  g.center_a = center_a;
  g.r_max = r_max;
  g.n_r = n_r;
  g.n_phi = n_phi;
  g.dr = r_max / n_r;
  g.dphi = 2.0 * pi / n_phi;
  return g;
}

}  // namespace plab
