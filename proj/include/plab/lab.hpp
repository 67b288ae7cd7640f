#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plab/config_text.hpp"
#include "plab/io.hpp"
#include "plab/nodal.hpp"
#include "plab/solver.hpp"

namespace plab::lab {

struct DomainSpec {
  double center_a = 0.0;
  double r_max = 1.0;
  int n_r = 0;
  int n_phi = 0;
  std::vector<std::pair<double, double>> points;  // (r, beta) control points

  RadialProfile profile() const { return RadialProfile(points); }
};

DomainSpec domain_from_doc(const cfg::Document& doc, const std::string& prefix);
DomainSpec load_domain_spec(const std::string& path);

enum class ExperimentKind { first, second, nodal, moving_polarization, symmetry_check, lemma_suite, refinement_sweep };

ExperimentKind kind_from_string(const std::string& s);
std::string kind_to_string(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::second;
  std::string output_dir;
  uint64_t seed = 1;
  std::vector<double> p_list;
  std::vector<std::pair<int, int>> grids;
  DomainSpec domain;
  SolverConfig solver;
  std::optional<double> epsilon_reg;  // otherwise: 0 for p >= 2, 1e-8/(2 r_max) below
  int suite_masks = 100;
  int suite_functions = 200;
  std::string config_hash;
};

ExperimentConfig parse_experiment(const cfg::Document& doc, const std::string& base_dir);
ExperimentConfig load_experiment(const std::string& path);

struct RunRow {
  double p = 0.0;
  int n_r = 0;
  int n_phi = 0;
  std::optional<double> lambda1, lambda2, dist, theta_star;
  std::optional<bool> converged1, converged2;
  std::optional<bool> symmetric;
};

struct RunRecord {
  std::string config_hash;
  std::string csv;  // exact bytes written to runs.csv
  std::vector<RunRow> rows;
  std::vector<std::string> notes;
  int errors = 0;
  double wall_seconds = 0.0;
};

/// Executes the experiment over the product of p-list and grid list, writing
/// one CSV row per run plus rasters, dumps, and solver logs under the output
/// directory. Configuration and output problems throw before any solve;
/// non-convergence is recorded in the rows, not thrown.
RunRecord run(const ExperimentConfig& config);

/// Resolves the output directory against the optional output-root
/// environment variable (PLAB_OUTPUT_ROOT).
std::string resolve_output_dir(const std::string& dir);

// ---------------------------------------------------------------------------
// property suite

enum class SuiteMutation { none, broken_reflection };

struct SuiteOptions {
  uint64_t seed = 1;
  int masks = 100;      // symmetric masks (an equal number of perturbed ones is derived)
  int functions = 200;  // random functions for the rearrangement identities
  int n_r = 16;
  int n_phi = 32;
  SuiteMutation mutation = SuiteMutation::none;  // test hook: break the pairing on purpose
};

struct PropertyResult {
  std::string name;
  long cases = 0;
  long passes = 0;
  std::string witness;  // empty when the property held; otherwise minimized by grid halving
  bool ok() const { return cases == passes; }
};

struct SuiteRecord {
  std::vector<PropertyResult> properties;
  bool all_pass = true;
  std::string csv;
};

/// Runs every polarization property over a pseudo-random corpus derived from
/// the seed: rearrangement identities, set monotonicity, the three-way
/// symmetry characterization, and support containment.
SuiteRecord lemma_suite(const SuiteOptions& options);

// ---------------------------------------------------------------------------
// corpus generators (shared between the suite and the tests)

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed);
  uint64_t next();
  double uniform();                    // [0, 1)
  double uniform(double a, double b);  // [a, b)
  int uniform_int(int lo, int hi);     // inclusive
};

RadialProfile random_profile(const PolarGrid& grid, Rng& rng);
DomainMaskPtr random_symmetric_mask(const PolarGrid& grid, Rng& rng);
/// Symmetric mask with one interior cell at phi > 0 toggled off.
DomainMaskPtr perturb_one_cell(const DomainMaskPtr& mask, Rng& rng);
/// Mask symmetric about the axis but with each angular section centered at
/// phi = pi instead of 0.
DomainMaskPtr reversed_arc_mask(const PolarGrid& grid, Rng& rng);
GridFunction random_function(const DomainMaskPtr& support_mask, Rng& rng);
std::pair<DomainMaskPtr, DomainMaskPtr> random_nested_masks(const PolarGrid& grid, Rng& rng);

}  // namespace plab::lab
