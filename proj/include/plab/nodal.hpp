#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plab/energy.hpp"
#include "plab/polarization.hpp"

namespace plab {

struct ProbeEstimate {
  Cell cell;
  char orientation = 'r';  // 'r': radial probe (arc-like boundary), 'a': angular (ray-like)
  double estimate = 0.0;   // outward normal derivative estimate
  bool second_order = true;
};

struct NodalReport {
  // zero_cells is the discrete nodal set: cells with |u| <= tau plus the
  // inside endpoints of sign-change edges, so it is nonempty whenever u
  // changes sign. plus/minus are the remaining strict sign cells; the three
  // sets partition the inside cells.
  CellSet zero_cells;
  CellSet plus_cells;
  CellSet minus_cells;
  double tau = 0.0;
  bool flipped = false;  // true when u was negated to put the negative sign at the boundary
  bool fat_nodal_flag = false;

  double dist_to_boundary = -1.0;
  std::optional<double> theta_star;
  int theta_star_index = 0;
  CellSet y_cells;
  CellSet y_boundary_cells;
  bool y_singleton = false;
  bool degenerate = false;  // nodal set already within 2h of the boundary

  std::vector<ProbeEstimate> normal_derivative_probes;
  std::string regularity_note = "interior/exterior ball regularity assumed, not checked";
};

/// Sign classification of u over the mask. Throws "no sign information" when
/// u vanishes identically. Fills only the sign fields of the report.
NodalReport nodal_sets(const GridFunction& u, const DomainMask& mask);

/// Distance between the discrete nodal set and the boundary cells.
double nodal_boundary_distance(const NodalReport& report, const DomainMask& mask, const BoundarySet& boundary);

/// Smallest lattice angle theta > 0 whose reflection moves the cell out of
/// the domain. Scans theta = k*dphi/2 for k = 1..n_phi and throws if none
/// exits (the full-circle intersection case excluded by construction).
double theta_of_point(const DomainMask& mask, Cell cell);
int theta_index_of_point(const DomainMask& mask, Cell cell);

struct ThetaStarResult {
  bool degenerate = false;  // nodal set within 2h of the boundary
  double theta_star = 0.0;
  int plane_index = 0;
  CellSet y_cells;
  CellSet y_boundary_cells;
  bool y_singleton = false;
};

/// First-contact angle over the closed positive region and the nodal set,
/// with the contact set Y and its relative boundary (8-neighborhood).
/// Requires the sign convention "negative near the boundary": flips the
/// roles via report.flipped when needed and throws "no sign is interior"
/// when both signs touch the boundary layer.
ThetaStarResult theta_star(const DomainMask& mask, const NodalReport& report);

/// Applies the boundary sign convention: returns a possibly negated copy of
/// u (with report fields swapped) so that the positive region stays away
/// from the boundary layer. Returns nullopt when both signs touch it.
std::optional<GridFunction> normalize_boundary_sign(const GridFunction& u, NodalReport& report, const DomainMask& mask);

struct MovingPolarizationReport {
  bool skipped = false;
  std::string message;

  double theta_star = 0.0;
  int plane_index = 0;
  double dist_before = 0.0;
  double dist_after = 0.0;
  double two_h = 0.0;

  bool support_contained = false;   // supp(w) inside the domain
  bool part_containment = false;    // supp(w) inside P(plus support) u Ptilde(minus support)
  bool mass_exact_plus = false;     // bit-exact p-mass preservation of the parts
  bool mass_exact_minus = false;
  double energy_plus_rel = 0.0;     // relative energy change of the parts
  double energy_minus_rel = 0.0;
  double rayleigh_plus = 0.0;       // part quotients of the polarized function
  double rayleigh_minus = 0.0;
  bool touches_after = false;       // dist_after <= 2h

  GridFunction w;  // the polarized function
  NodalReport nodal;
};

/// Polarizes u at the first-contact angle and reports support containment,
/// rearrangement preservation of the parts, and the nodal-boundary distance
/// of the result. Skips (with a message) when the nodal set of u already
/// touches the boundary at scale 2h, which is the expected outcome on
/// circularly symmetric domains.
MovingPolarizationReport moving_polarization_experiment(const DomainMask& mask, const GridFunction& u,
                                                        const EnergyConfig& cfg);

/// One-sided second-order estimates of the outward normal derivative at the
/// given boundary cells; one entry per (cell, inward neighbor) pair. Throws
/// if a probe cell is not a boundary cell.
std::vector<ProbeEstimate> normal_derivative_probe(const GridFunction& w, const DomainMask& mask,
                                                   const CellSet& probe_cells);

}  // namespace plab
