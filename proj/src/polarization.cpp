#include "plab/polarization.hpp"

#include <cmath>
#include <stdexcept>

namespace plab {

PolarizationPlane PolarizationPlane::from_index(const PolarGrid& g, int k) {
  int two_n = 2 * g.n_phi;
  int m = k % two_n;
  if (m > g.n_phi) m -= two_n;
  if (m <= -g.n_phi) m += two_n;
  return PolarizationPlane(m, g.n_phi);
}

PolarizationPlane PolarizationPlane::from_theta(const PolarGrid& g, double theta) {
  double k_real = 2.0 * theta / g.dphi;
  long long k = std::llround(k_real);
  if (std::abs(k_real - static_cast<double>(k)) > 1e-9 * std::max(1.0, std::abs(k_real)))
    throw std::invalid_argument("PolarizationPlane: theta is not lattice-aligned (2*theta must be a multiple of dphi)");
  return from_index(g, static_cast<int>(k));
}

PolarizationPlane PolarizationPlane::opposite() const {
  PolarizationPlane p(*this);
  int two_n = 2 * n_phi_;
  int m = (k_ + n_phi_) % two_n;
  if (m > n_phi_) m -= two_n;
  if (m <= -n_phi_) m += two_n;
  p.k_ = m;
  return p;
}

Cell reflect_point(const PolarizationPlane& plane, Cell c) { return {c.i, plane.reflect_j(c.j)}; }

GridFunction polarize_function(const GridFunction& v, const PolarizationPlane& plane, PolVariant variant) {
  GridFunction out = v;
  const PolarGrid& g = v.grid;
  if (plane.n_phi() != g.n_phi) throw std::invalid_argument("polarize_function: plane belongs to another grid");
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_phi; ++j) {
      if (plane.side(j) != PolarizationPlane::Side::plus) continue;
      int jr = plane.reflect_j(j);
      double a = v.at(i, j);
      double b = v.at(i, jr);
      double lo = std::min(a, b);
      double hi = std::max(a, b);
      if (variant == PolVariant::P) {
        out.at(i, j) = lo;
        out.at(i, jr) = hi;
      } else {
        out.at(i, j) = hi;
        out.at(i, jr) = lo;
      }
    }
  }
  return out;
}

PolarizedFunction make_polarized(const GridFunction& v, const PolarizationPlane& plane, PolVariant variant) {
  return PolarizedFunction{polarize_function(v, plane, variant), plane, variant};
}

CellSet polarize_cells(const PolarGrid& g, const CellSet& cells, const PolarizationPlane& plane, PolVariant variant) {
  CellSet out(g);
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < g.n_phi; ++j) {
      bool here = cells.contains(i, j);
      auto s = plane.side(j);
      if (s == PolarizationPlane::Side::on_plane) {
        if (here) out.insert(i, j);
        continue;
      }
      bool mirrored = cells.contains(i, plane.reflect_j(j));
      bool intersect = here && mirrored;
      bool unite = here || mirrored;
      bool plus_gets_intersection = (variant == PolVariant::P);
      bool take = (s == PolarizationPlane::Side::plus) == plus_gets_intersection ? intersect : unite;
      if (take) out.insert(i, j);
    }
  }
  return out;
}

CellSet polarize_mask(const DomainMask& mask, const PolarizationPlane& plane, PolVariant variant) {
  return polarize_cells(mask.grid(), mask.inside(), plane, variant);
}

namespace {

using detail_check = SymmetryCheck;

SymmetryCheck check_planes(const DomainMask& mask, int k_lo, int k_hi, PolVariant variant) {
  const PolarGrid& g = mask.grid();
  for (int k = k_lo; k <= k_hi; ++k) {
    auto plane = PolarizationPlane::from_index(g, k);
    CellSet polarized = polarize_mask(mask, plane, variant);
    if (polarized == mask.inside()) continue;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j)
        if (polarized.contains(i, j) != mask.is_inside(i, j))
          return {false, SymmetryWitness{plane.theta(), k, Cell{i, j}}};
  }
  return {true, std::nullopt};
}

}  // namespace

namespace detail {

SymmetryCheck symmetry_condition_i(const DomainMask& mask) {
  int n = mask.grid().n_phi;
  auto a = check_planes(mask, -n / 2, 0, PolVariant::P);
  if (!a.symmetric) return a;
  return check_planes(mask, 0, n / 2, PolVariant::PTilde);
}

SymmetryCheck symmetry_condition_ii(const DomainMask& mask) {
  int n = mask.grid().n_phi;
  return check_planes(mask, -n, 0, PolVariant::P);
}

SymmetryCheck symmetry_condition_iii(const DomainMask& mask) {
  int n = mask.grid().n_phi;
  return check_planes(mask, 0, n, PolVariant::PTilde);
}

}  // namespace detail

SymmetryCheck is_circularly_symmetric(const DomainMask& mask) { return detail::symmetry_condition_iii(mask); }

}  // namespace plab
