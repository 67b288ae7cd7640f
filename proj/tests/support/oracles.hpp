#pragma once

#include <Eigen/Dense>
#include <vector>

#include "plab/domain.hpp"
#include "plab/grid_function.hpp"

// Independent reference computations for the test suites. These reimplement
// the discretization from its face-conductance description and must not call
// into the energy/solver code paths they check.
namespace oracle {

/// Root of the Bessel function J_nu on a bracketing interval, by bisection.
double bessel_zero(int nu, double lo, double hi);

struct DenseEig {
  std::vector<double> eigenvalues;          // ascending
  std::vector<std::vector<double>> vectors; // per eigenvalue, over dofs
  std::vector<int> cells;                   // dof -> flat cell index
};

/// Two-sided generalized eigenproblem K v = lambda D v for the p = 2 form,
/// assembled densely from face conductances:
///   radial face between rings i and i+1: (i+1) dphi, halved at ghost faces;
///   angular face on ring i: dr / (r_i dphi), halved at ghost faces.
DenseEig dense_p2_eigs(const plab::DomainMask& mask, int count);

/// Rayleigh quotient of an arbitrary dof vector under the dense form.
double dense_p2_rayleigh(const plab::DomainMask& mask, const plab::GridFunction& v);

/// Turns a dof vector from dense_p2_eigs into a grid function on the mask.
plab::GridFunction to_grid_function(const plab::DomainMaskPtr& mask, const DenseEig& eig, int which);

/// Half-disk of radius 1 with the straight edges on the angular faces at
/// +-pi/2 and the arc exactly on a radial face (r_max = n_r/(n_r-2)).
plab::DomainMaskPtr half_disk(int n_r, int n_phi);
plab::PolarGrid half_disk_grid(int n_r, int n_phi);

/// Brute-force minimum distance between two cell lists via pairwise centers.
double brute_force_distance(const plab::PolarGrid& g, const std::vector<plab::Cell>& a,
                            const std::vector<plab::Cell>& b);

/// Random connected blob mask grown cell by cell; valid by construction.
plab::DomainMaskPtr random_blob_mask(const plab::PolarGrid& g, uint64_t seed, int target_cells);

}  // namespace oracle
