#pragma once

#include <utility>
#include <vector>

#include "plab/domain.hpp"

namespace plab {

/// Real-valued field over a grid, zero outside the attached domain mask.
/// The mask records where the function is allowed to live (the discrete
/// zero-trace class); rebinding to a larger mask models trivial extension.
struct GridFunction {
  PolarGrid grid;
  DomainMaskPtr domain;
  std::vector<double> values;  // size n_r * n_phi, row-major (i outer)

  double at(int i, int j) const { return values[static_cast<size_t>(i) * grid.n_phi + j]; }
  double& at(int i, int j) { return values[static_cast<size_t>(i) * grid.n_phi + j]; }
};

GridFunction make_zero_function(const DomainMaskPtr& domain);

/// True when every nonzero value sits on an inside cell of the attached mask.
bool vanishes_outside_domain(const GridFunction& v);

/// Reattaches the function to another mask over the same grid; the support
/// must fit inside it.
GridFunction rebind_domain(const GridFunction& v, DomainMaskPtr domain);

/// Pointwise positive and negative parts; v == plus + minus, plus >= 0 >= minus.
std::pair<GridFunction, GridFunction> split_signs(const GridFunction& v);

/// Cells where |v| > 0.
CellSet support_of(const GridFunction& v);

/// Cells where v > 0 / v < 0 (open sign regions).
CellSet positive_support(const GridFunction& v);
CellSet negative_support(const GridFunction& v);

double max_abs(const GridFunction& v);

}  // namespace plab
