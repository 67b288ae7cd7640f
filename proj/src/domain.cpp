#include "plab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace plab {

bool CellSet::is_subset_of(const CellSet& other) const {
  if (n_r_ != other.n_r_ || n_phi_ != other.n_phi_) return false;
  for (size_t k = 0; k < flags_.size(); ++k)
    if (flags_[k] && !other.flags_[k]) return false;
  return true;
}

CellSet set_union(const CellSet& a, const CellSet& b) {
  CellSet out(a.n_r(), a.n_phi());
  for (int i = 0; i < a.n_r(); ++i)
    for (int j = 0; j < a.n_phi(); ++j)
      if (a.contains(i, j) || b.contains(i, j)) out.insert(i, j);
  return out;
}

CellSet set_intersection(const CellSet& a, const CellSet& b) {
  CellSet out(a.n_r(), a.n_phi());
  for (int i = 0; i < a.n_r(); ++i)
    for (int j = 0; j < a.n_phi(); ++j)
      if (a.contains(i, j) && b.contains(i, j)) out.insert(i, j);
  return out;
}

RadialProfile::RadialProfile(std::vector<std::pair<double, double>> control_points) : pts_(std::move(control_points)) {
  if (pts_.empty()) throw std::invalid_argument("RadialProfile: needs at least one control point");
  std::sort(pts_.begin(), pts_.end());
  for (const auto& [r, b] : pts_) {
    if (!(r > 0.0)) throw std::invalid_argument("RadialProfile: control radii must be positive");
    if (!(b >= 0.0) || b >= pi) throw std::invalid_argument("RadialProfile: beta must lie in [0, pi)");
  }
}

double RadialProfile::beta(double r) const {
  if (r <= pts_.front().first) return pts_.front().second;
  if (r > pts_.back().first) return 0.0;
  for (size_t k = 1; k < pts_.size(); ++k) {
    if (r <= pts_[k].first) {
      const auto& [r0, b0] = pts_[k - 1];
      const auto& [r1, b1] = pts_[k];
      if (r1 == r0) return b1;
      double t = (r - r0) / (r1 - r0);
      return b0 + t * (b1 - b0);
    }
  }
  return 0.0;
}

int cell_neighbors(const PolarGrid& g, Cell c, Cell out[4]) {
  int n = 0;
  if (c.i > 0) out[n++] = {c.i - 1, c.j};
  if (c.i + 1 < g.n_r) out[n++] = {c.i + 1, c.j};
  out[n++] = {c.i, g.wrap_j(c.j - 1)};
  out[n++] = {c.i, g.wrap_j(c.j + 1)};
  return n;
}

namespace {

// BFS over inside cells; returns the first cell of a second component if the
// set is disconnected.
std::optional<Cell> find_disconnection(const PolarGrid& g, const CellSet& inside) {
  if (inside.empty()) return std::nullopt;
  CellSet seen(g.n_r, g.n_phi);
  Cell start{-1, -1};
  for (int i = 0; i < g.n_r && start.i < 0; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (inside.contains(i, j)) {
        start = {i, j};
        break;
      }
  std::deque<Cell> queue{start};
  seen.insert(start);
  Cell nb[4];
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    int n = cell_neighbors(g, c, nb);
    for (int k = 0; k < n; ++k)
      if (inside.contains(nb[k]) && !seen.contains(nb[k])) {
        seen.insert(nb[k]);
        queue.push_back(nb[k]);
      }
  }
  if (seen.count() == inside.count()) return std::nullopt;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (inside.contains(i, j) && !seen.contains(i, j)) return Cell{i, j};
  return std::nullopt;
}

}  // namespace

DomainMask::DomainMask(PolarGrid grid, CellSet inside) : grid_(grid), inside_(std::move(inside)) {
  if (inside_.n_r() != grid_.n_r || inside_.n_phi() != grid_.n_phi)
    throw std::invalid_argument("DomainMask: cell set shape does not match grid");
  if (inside_.empty()) throw std::invalid_argument("DomainMask: empty domain");
  for (int j = 0; j < grid_.n_phi; ++j)
    if (inside_.contains(grid_.n_r - 1, j))
      throw std::invalid_argument("DomainMask: inside cells reach the outermost radial ring; increase r_max");
  if (auto bad = find_disconnection(grid_, inside_)) {
    throw std::invalid_argument("DomainMask: disconnected domain, second component starts at cell (" +
                                std::to_string(bad->i) + ", " + std::to_string(bad->j) + ")");
  }
}

CellSet DomainMask::boundary_layer() const {
  CellSet out(grid_.n_r, grid_.n_phi);
  Cell nb[4];
  for (int i = 0; i < grid_.n_r; ++i)
    for (int j = 0; j < grid_.n_phi; ++j) {
      if (!inside_.contains(i, j)) continue;
      Cell c{i, j};
      int n = cell_neighbors(grid_, c, nb);
      bool edge = (n < 4 && i + 1 >= grid_.n_r);  // truncated outward neighbor
      for (int k = 0; k < n && !edge; ++k)
        if (!inside_.contains(nb[k])) edge = true;
      // Ring 0 has no inward cell; the puncture at r = 0 is not counted as a
      // boundary contact.
      if (edge) out.insert(i, j);
    }
  return out;
}

DomainMask mask_from_profile(const PolarGrid& grid, const RadialProfile& profile) {
  CellSet inside(grid);
  for (int i = 0; i < grid.n_r; ++i) {
    double b = profile.beta(grid.r(i));
    if (b <= 0.0) continue;
    for (int j = 0; j < grid.n_phi; ++j)
      if (std::abs(grid.phi(j)) < b) inside.insert(i, j);
  }
  if (inside.empty()) throw std::invalid_argument("mask_from_profile: empty domain");
  return DomainMask(grid, std::move(inside));
}

DomainMaskPtr make_mask(PolarGrid grid, CellSet inside) {
  return std::make_shared<const DomainMask>(grid, std::move(inside));
}

DomainMaskPtr make_profile_mask(const PolarGrid& grid, const RadialProfile& profile) {
  return std::make_shared<const DomainMask>(mask_from_profile(grid, profile));
}

DomainMaskPtr container_mask(const PolarGrid& grid) {
  CellSet inside(grid);
  for (int i = 0; i + 1 < grid.n_r; ++i)
    for (int j = 0; j < grid.n_phi; ++j) inside.insert(i, j);
  return make_mask(grid, std::move(inside));
}

BoundarySet boundary_of(const DomainMask& mask) {
  const PolarGrid& g = mask.grid();
  CellSet out(g);
  Cell nb[4];
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      if (mask.is_inside(i, j)) continue;
      Cell c{i, j};
      int n = cell_neighbors(g, c, nb);
      for (int k = 0; k < n; ++k)
        if (mask.is_inside(nb[k])) {
          out.insert(i, j);
          break;
        }
    }
  return BoundarySet{std::move(out)};
}

double cell_distance(const DomainMask& mask, const CellSet& a, const CellSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("cell_distance: empty cell set");
  const PolarGrid& g = mask.grid();
  auto la = a.cells();
  auto lb = b.cells();
  std::vector<double> bx(lb.size()), by(lb.size());
  for (size_t k = 0; k < lb.size(); ++k) g.cartesian(lb[k].i, lb[k].j, bx[k], by[k]);
  double best = std::numeric_limits<double>::infinity();
  for (const Cell& ca : la) {
    double x, y;
    g.cartesian(ca.i, ca.j, x, y);
    for (size_t k = 0; k < lb.size(); ++k) {
      double dx = x - bx[k], dy = y - by[k];
      double d2 = dx * dx + dy * dy;
      if (d2 < best) best = d2;
    }
  }
  return std::sqrt(best);
}

}  // namespace plab
