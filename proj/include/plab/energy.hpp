#pragma once

#include <vector>

#include "plab/grid_function.hpp"
#include "plab/kernels.hpp"

namespace plab {

/// Parameters of the p-Dirichlet energy. epsilon_reg smooths the gradient
/// norm as (|grad v|^2 + epsilon_reg^2)^(p/2); it must be positive for p < 2
/// where the unregularized functional is not differentiable.
struct EnergyConfig {
  double p = 2.0;
  double epsilon_reg = 0.0;
};

void validate(const EnergyConfig& cfg);

/// Discrete p-Dirichlet energy: sum over inside cells of
/// w_c (G_c + eps^2)^(p/2), with the symmetric face-difference gradient G_c
/// and zero ghost values outside the mask (the Dirichlet condition).
/// Ring subtotals are accumulated in value-sorted order, so the result is
/// invariant under any rearrangement of values within a ring.
double energy(const GridFunction& v, const EnergyConfig& cfg);

/// sum |v|^p w over the whole grid, with the same ring-sorted accumulation.
double mass(const GridFunction& v, const EnergyConfig& cfg);

/// energy/mass; rejects v == 0.
double rayleigh(const GridFunction& v, const EnergyConfig& cfg);

/// Weak-form operator: cell c carries (1/p) d(energy)/d(v_c); zero outside
/// the mask. Pairing it with a hat function at c is reading entry c.
std::vector<double> p_operator(const GridFunction& v, const EnergyConfig& cfg);

/// Weak-form mass term per cell: |v_c|^(p-2) v_c w_c on inside cells.
std::vector<double> mass_density(const GridFunction& v, const EnergyConfig& cfg);

/// max_c | (p_operator - lambda * mass_density)_c | over inside cells: the
/// defect of the discrete eigen-equation tested against every hat function.
double weak_residual(const GridFunction& u, double lambda, const EnergyConfig& cfg);

/// <p_operator(v), v> / mass(v): the eigenvalue estimate consistent with the
/// weak form; equals rayleigh(v) when epsilon_reg = 0.
double weak_rayleigh(const GridFunction& v, const EnergyConfig& cfg);

namespace energy_detail {
/// (G_c + eps^2)^(p/2-1) w_c on inside cells, zero elsewhere: the frozen
/// conductance field used for operator assembly and solver linearizations.
std::vector<double> conductance_field(const GridFunction& v, const EnergyConfig& cfg);

/// Applies the operator linearized at frozen conductances sigma to values x.
std::vector<double> apply_frozen_operator(const PolarGrid& g, const DomainMask& mask,
                                          const kernels::StencilGeom& geom, const std::vector<double>& sigma,
                                          const std::vector<double>& x);
}  // namespace energy_detail

}  // namespace plab
