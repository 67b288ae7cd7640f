#pragma once

#include <string>
#include <vector>

#include "plab/energy.hpp"

namespace plab {

struct SolverConfig {
  int max_iters = 800;
  double tol_lambda = 1e-10;   // relative eigenvalue stall tolerance
  double tol_residual = 1e-8;  // weak-form defect tolerance
  double step0 = 0.5;          // initial line-search step
  double backtrack = 0.5;      // step shrink factor
  int max_backtracks = 40;
  int restarts = 4;
  uint64_t seed = 1;
};

void validate(const SolverConfig& cfg);

struct IterationRecord {
  int iteration = 0;
  double value = 0.0;  // objective (Rayleigh quotient or two-sided max)
  double step = 0.0;
  char active = '*';  // '+', '-', or '*' when both sides drive the step
  const char* phase = "";
};

struct EigenpairResult {
  double lambda = 0.0;
  GridFunction u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // Second eigenpair only: recombination scalars applied to the sign parts,
  // the balanced one-sided weak quotients, the terminal two-sided objective,
  // and the number of distinct minimizers seen across restarts.
  double alpha = 1.0;
  double beta = 1.0;
  double sided_plus = 0.0;
  double sided_minus = 0.0;
  double j_value = 0.0;
  int distinct_minimizers = 1;
  std::vector<IterationRecord> log;
};

/// First eigenpair: Rayleigh-quotient descent with sign projection, finished
/// by frozen-coefficient inverse iteration. The result is nonnegative,
/// mass-normalized, and converged only if it is positive on every inside
/// cell and the weak-form defect is below tolerance.
EigenpairResult solve_first(const DomainMaskPtr& mask, const EnergyConfig& cfg, const SolverConfig& scfg);

/// Second eigenpair via the two-sided quotient: projected subgradient descent
/// on max(rayleigh(v+), rayleigh(v-)) with re-splitting each step, a
/// recombination equalizing the one-sided weak quotients, and a
/// frozen-coefficient shift-inverted polish whose fixed points satisfy the
/// weak form. Multi-start over deterministic seeds; throws only if every
/// restart collapses to a one-signed function.
EigenpairResult solve_second(const DomainMaskPtr& mask, const EnergyConfig& cfg, const SolverConfig& scfg);

namespace solver_detail {
/// Gradient of the Rayleigh quotient (scaled by p): p_operator and
/// mass_density against the current weak quotient. Exposed for the
/// finite-difference checks in the test suite.
std::vector<double> rayleigh_gradient(const GridFunction& v, const EnergyConfig& cfg);

/// Subgradient of max(rayleigh(v+), rayleigh(v-)) at v, masked to the sign
/// region that attains the max (both regions near a tie).
std::vector<double> two_sided_subgradient(const GridFunction& v, const EnergyConfig& cfg);

/// One-sided weak quotients of a sign-changing function: the operator tested
/// against the positive / negative part over that part's p-mass.
std::pair<double, double> sided_quotients(const GridFunction& v, const EnergyConfig& cfg);

/// Scales the negative part by t > 0 so the two sided quotients agree;
/// returns the balanced function and t.
std::pair<GridFunction, double> balance_signs(const GridFunction& v, const EnergyConfig& cfg);

GridFunction antisymmetric_seed(const DomainMaskPtr& mask);
GridFunction random_seed(const DomainMaskPtr& mask, uint64_t seed);
}  // namespace solver_detail

}  // namespace plab
