#include "plab/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace plab {

GridFunction make_zero_function(const DomainMaskPtr& domain) {
  GridFunction f;
  f.grid = domain->grid();
  f.domain = domain;
  f.values.assign(static_cast<size_t>(f.grid.n_r) * f.grid.n_phi, 0.0);
  return f;
}

bool vanishes_outside_domain(const GridFunction& v) {
  const PolarGrid& g = v.grid;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (v.at(i, j) != 0.0 && !v.domain->is_inside(i, j)) return false;
  return true;
}

GridFunction rebind_domain(const GridFunction& v, DomainMaskPtr domain) {
  if (!(domain->grid() == v.grid)) throw std::invalid_argument("rebind_domain: grid mismatch");
  GridFunction out = v;
  out.domain = std::move(domain);
  if (!vanishes_outside_domain(out)) throw std::invalid_argument("rebind_domain: support escapes the target mask");
  return out;
}

std::pair<GridFunction, GridFunction> split_signs(const GridFunction& v) {
  GridFunction plus = v, minus = v;
  for (size_t k = 0; k < v.values.size(); ++k) {
    double x = v.values[k];
    plus.values[k] = x > 0.0 ? x : 0.0;
    minus.values[k] = x < 0.0 ? x : 0.0;
  }
  return {std::move(plus), std::move(minus)};
}

CellSet support_of(const GridFunction& v) {
  CellSet out(v.grid);
  for (int i = 0; i < v.grid.n_r; ++i)
    for (int j = 0; j < v.grid.n_phi; ++j)
      if (v.at(i, j) != 0.0) out.insert(i, j);
  return out;
}

CellSet positive_support(const GridFunction& v) {
  CellSet out(v.grid);
  for (int i = 0; i < v.grid.n_r; ++i)
    for (int j = 0; j < v.grid.n_phi; ++j)
      if (v.at(i, j) > 0.0) out.insert(i, j);
  return out;
}

CellSet negative_support(const GridFunction& v) {
  CellSet out(v.grid);
  for (int i = 0; i < v.grid.n_r; ++i)
    for (int j = 0; j < v.grid.n_phi; ++j)
      if (v.at(i, j) < 0.0) out.insert(i, j);
  return out;
}

double max_abs(const GridFunction& v) {
  double m = 0.0;
  for (double x : v.values) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace plab
