#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plab/polar_grid.hpp"

namespace plab {

/// Set of grid cells, stored as flags over the full lattice. Iteration and
/// list views are row-major in (i, j), so all derived output is deterministic.
class CellSet {
 public:
  CellSet() = default;
  CellSet(int n_r, int n_phi) : n_r_(n_r), n_phi_(n_phi), flags_(static_cast<size_t>(n_r) * n_phi, 0) {}
  explicit CellSet(const PolarGrid& g) : CellSet(g.n_r, g.n_phi) {}

  int n_r() const { return n_r_; }
  int n_phi() const { return n_phi_; }
  int count() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(int i, int j) const {
    if (i < 0 || i >= n_r_ || j < 0 || j >= n_phi_) return false;
    return flags_[static_cast<size_t>(i) * n_phi_ + j] != 0;
  }
  bool contains(Cell c) const { return contains(c.i, c.j); }

  void insert(int i, int j) {
    auto& f = flags_[static_cast<size_t>(i) * n_phi_ + j];
    if (!f) {
      f = 1;
      ++count_;
    }
  }
  void insert(Cell c) { insert(c.i, c.j); }
  void erase(int i, int j) {
    auto& f = flags_[static_cast<size_t>(i) * n_phi_ + j];
    if (f) {
      f = 0;
      --count_;
    }
  }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    out.reserve(count_);
    for (int i = 0; i < n_r_; ++i)
      for (int j = 0; j < n_phi_; ++j)
        if (flags_[static_cast<size_t>(i) * n_phi_ + j]) out.push_back({i, j});
    return out;
  }

  bool is_subset_of(const CellSet& other) const;
  bool operator==(const CellSet& other) const { return n_r_ == other.n_r_ && n_phi_ == other.n_phi_ && flags_ == other.flags_; }

  const std::vector<uint8_t>& flags() const { return flags_; }

 private:
  int n_r_ = 0;
  int n_phi_ = 0;
  int count_ = 0;
  std::vector<uint8_t> flags_;
};

CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_intersection(const CellSet& a, const CellSet& b);

/// Half-angle profile beta(r) generating a circularly symmetric domain
/// {beta(r) > 0, |phi| < beta(r)}. Piecewise linear between control points;
/// beta is clamped to its first value below the first control radius and is
/// zero beyond the last one. Every control beta must lie in [0, pi).
class RadialProfile {
 public:
  RadialProfile(std::vector<std::pair<double, double>> control_points);
  double beta(double r) const;
  const std::vector<std::pair<double, double>>& control_points() const { return pts_; }

 private:
  std::vector<std::pair<double, double>> pts_;
};

/// Boolean interior field over a grid. Valid masks are nonempty, 4-connected
/// (with angular wraparound) and keep the outermost radial ring empty so an
/// outside collar always exists for boundary extraction.
class DomainMask {
 public:
  DomainMask(PolarGrid grid, CellSet inside);

  const PolarGrid& grid() const { return grid_; }
  const CellSet& inside() const { return inside_; }
  bool is_inside(int i, int j) const { return inside_.contains(i, j); }
  bool is_inside(Cell c) const { return inside_.contains(c); }
  int inside_count() const { return inside_.count(); }

  /// Inside cells that have at least one outside 4-neighbor.
  CellSet boundary_layer() const;

 private:
  PolarGrid grid_;
  CellSet inside_;
};

using DomainMaskPtr = std::shared_ptr<const DomainMask>;

/// Outside cells adjacent to inside cells; the discrete stand-in for the
/// topological boundary.
struct BoundarySet {
  CellSet cells;
};

DomainMask mask_from_profile(const PolarGrid& grid, const RadialProfile& profile);
DomainMaskPtr make_mask(PolarGrid grid, CellSet inside);
DomainMaskPtr make_profile_mask(const PolarGrid& grid, const RadialProfile& profile);

/// Mask covering every cell except the outermost ring; plays the role of the
/// whole plane when functions are trivially extended beyond their domain.
DomainMaskPtr container_mask(const PolarGrid& grid);

BoundarySet boundary_of(const DomainMask& mask);

/// Minimum Euclidean distance between cell centers of the two sets.
double cell_distance(const DomainMask& mask, const CellSet& a, const CellSet& b);

/// 4-neighbors with angular wraparound; radial direction does not wrap.
/// Returns the number of valid neighbors written into out[4].
int cell_neighbors(const PolarGrid& g, Cell c, Cell out[4]);

}  // namespace plab
